#include "fiskit/structure.hpp"

#include <Eigen/SVD>

namespace fiskit {

namespace {

// Minimum-norm least-squares solve with a relative singular value cutoff.
Eigen::VectorXcd min_norm_solve(const Eigen::MatrixXcd& M, const Eigen::VectorXcd& b,
                                int* rank_out = nullptr) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(1e-8);
    if (rank_out) *rank_out = int(svd.rank());
    return svd.solve(b);
}

} // namespace

std::shared_ptr<const FIStructure> FIStructure::make(ChartPtr chart,
                                                     std::vector<VectorField> v_frame,
                                                     std::vector<VectorField> complement,
                                                     double tol, std::optional<NormalForm> nf) {
    auto S = std::shared_ptr<FIStructure>(new FIStructure());
    S->chart_ = chart;
    S->v_frame_ = std::move(v_frame);
    S->complement_ = std::move(complement);
    S->normal_form_ = std::move(nf);
    const int n = S->n(), m = S->m();
    if (n + m != chart->dim())
        throw Error("frame size must match the chart dimension");

    std::vector<VectorField> combined = S->v_frame_;
    combined.insert(combined.end(), S->complement_.begin(), S->complement_.end());
    S->coframe_ = CoFrame::dual_to(combined, n, tol);

    S->theta_top_ = Form::scalar(ScalarField::constant(chart, 1.0));
    for (int l = 0; l < m; ++l) S->theta_top_ = wedge(S->theta_top_, S->coframe_.theta(l));

    auto report = check_formal_integrability(*S, tol);
    S->integrability_residual_ = report.residual;
    S->integrable_ = report.pass;
    return S;
}

StructurePtr normal_structure(ChartPtr chart, NormalForm nf, double tol) {
    std::vector<VectorField> v, comp;
    for (auto [re, im] : nf.z_pairs) {
        // d/dzbar = (d_re + i d_im)/2
        std::vector<ScalarField> cz, czb;
        for (int a = 0; a < chart->dim(); ++a) {
            cplx vre = (a == re) ? cplx(0.5) : cplx(0.0);
            cplx vim = (a == im) ? cplx(0.0, 0.5) : cplx(0.0);
            czb.push_back(ScalarField::constant(chart, vre + vim));
            cz.push_back(ScalarField::constant(chart, vre - vim));
        }
        v.emplace_back(chart, czb);
        comp.emplace_back(chart, cz);
    }
    for (int t : nf.t_axes) v.push_back(VectorField::coordinate_direction(chart, t));
    for (int y : nf.y_axes) comp.push_back(VectorField::coordinate_direction(chart, y));
    return FIStructure::make(chart, std::move(v), std::move(comp), tol, std::move(nf));
}

IntegrabilityReport check_formal_integrability(const FIStructure& S, double tol) {
    const int n = S.n(), dim = S.chart()->dim();
    IntegrabilityReport rep;
    if (n == 1) {
        rep.pass = true;
        return rep;
    }
    Eigen::MatrixXcd A(dim, n);
    Eigen::VectorXcd b(dim);
    for (int j = 0; j < n; ++j) {
        for (int k = j + 1; k < n; ++k) {
            auto br = lie_bracket(S.X(j), S.X(k));
            for (std::size_t p = 0; p < S.chart()->points(); ++p) {
                for (int nu = 0; nu < dim; ++nu) {
                    b(nu) = br.component(nu)(p);
                    for (int l = 0; l < n; ++l) A(nu, l) = S.X(l).component(nu)(p);
                }
                Eigen::VectorXcd c = min_norm_solve(A, b);
                double r = (A * c - b).norm();
                if (r > rep.residual) {
                    rep.residual = r;
                    rep.worst_point = p;
                }
            }
        }
    }
    rep.pass = rep.residual < tol;
    return rep;
}

LeviFlatReport check_levi_flat(const FIStructure& S, double tol) {
    std::vector<VectorField> both = S.v_frame();
    for (const auto& X : S.v_frame()) both.push_back(X.conjugate());
    auto [rmin, rmax] = pointwise_rank(both, tol);
    return {rmin, rmax, rmin == rmax};
}

CommutatorCoefficients commutator_coefficients(const FIStructure& S, double tol) {
    const int n = S.n(), dim = S.chart()->dim();
    const auto chart = S.chart();
    CommutatorCoefficients out;
    auto zero = ScalarField::constant(chart, 0.0);
    out.d.assign(n, std::vector<std::vector<ScalarField>>(n, std::vector<ScalarField>(n, zero)));
    out.e = out.d;

    Eigen::MatrixXcd M(dim, 2 * n);
    Eigen::VectorXcd b(dim);
    for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
            auto br = lie_bracket(S.X(j), S.X(k).conjugate());
            std::vector<Eigen::VectorXcd> dk(n, Eigen::VectorXcd(Eigen::Index(chart->points())));
            std::vector<Eigen::VectorXcd> ek(n, Eigen::VectorXcd(Eigen::Index(chart->points())));
            for (std::size_t p = 0; p < chart->points(); ++p) {
                for (int nu = 0; nu < dim; ++nu) {
                    b(nu) = br.component(nu)(p);
                    for (int l = 0; l < n; ++l) {
                        M(nu, l) = S.X(l).component(nu)(p);
                        M(nu, n + l) = -std::conj(S.X(l).component(nu)(p));
                    }
                }
                int rank = 0;
                Eigen::VectorXcd c = min_norm_solve(M, b, &rank);
                out.kernel_dimension = std::max(out.kernel_dimension, 2 * n - rank);
                double r = (M * c - b).norm();
                if (r > tol) throw InfeasibleDecomposition(p, r);
                out.residual = std::max(out.residual, r);
                for (int l = 0; l < n; ++l) {
                    dk[l](Eigen::Index(p)) = c(l);
                    ek[l](Eigen::Index(p)) = c(n + l);
                }
            }
            for (int l = 0; l < n; ++l) {
                out.d[j][k][l] = ScalarField(chart, std::move(dk[l]));
                out.e[j][k][l] = ScalarField(chart, std::move(ek[l]));
            }
        }
    }
    return out;
}

StructureForms structure_forms(StructurePtr S, double tol) {
    const int n = S->n(), m = S->m(), dim = S->chart()->dim();
    const auto chart = S->chart();
    StructureForms out;
    out.structure = S;
    out.entries.assign(m, std::vector<Form>(m));

    // Coefficients beta of theta_l^j over the coframe basis. The omega part
    // is determined uniquely; theta-theta components split evenly (the
    // pointwise minimum-norm representative); pure omega components cannot be
    // produced and form the residual.
    std::vector<std::vector<std::vector<ScalarField>>> beta(
        m, std::vector<std::vector<ScalarField>>(
               m, std::vector<ScalarField>(dim, ScalarField::constant(chart, 0.0))));

    for (int j = 0; j < m; ++j) {
        Form dtheta = exterior_derivative(S->theta(j));
        Form in_frame = change_basis(dtheta, S->coframe());
        for (const auto& K : mi::all(dim, 2)) {
            int a = K[0], bx = K[1];
            const auto& c = in_frame.coeff(K);
            if (bx < n) {
                out.residual = std::max(out.residual, c.max_abs());
            } else if (a < n) {
                beta[j][bx - n][a] = c;
            } else {
                beta[j][bx - n][a] = c * cplx(0.5);
                beta[j][a - n][bx] = c * cplx(-0.5);
            }
        }
    }
    if (out.residual > tol)
        throw Error("structure forms do not exist: d theta has components off the ideal "
                    "(residual " + std::to_string(out.residual) + ")");

    for (int j = 0; j < m; ++j) {
        for (int l = 0; l < m; ++l) {
            Form f(chart, 1);
            for (int c = 0; c < dim; ++c) f = f + S->coframe().form(c) * beta[j][l][c];
            out.entries[j][l] = f;
        }
    }
    out.trace = Form(chart, 1);
    for (int l = 0; l < m; ++l) out.trace = out.trace + out.entries[l][l];
    return out;
}

XiOperator xi_operator(const FIStructure& S, const StructureForms& forms,
                       bool theta_basic_asserted) {
    if (!theta_basic_asserted) {
        if (!S.normal_form())
            throw Error("xi_operator: assert a basic theta_top or use a normal-form chart");
        if (!is_basic_form(S, S.theta_top()))
            throw Error("xi_operator: theta_top is not basic on this normal-form chart");
    }
    return XiOperator{forms.trace};
}

TwistForm check_twist(const FIStructure& S, const Form& theta, double tol) {
    if (theta.degree() != 1) throw Error("twist must be a 1-form");
    Form dtheta = exterior_derivative(theta);
    Form in_frame = change_basis(dtheta, S.coframe());
    const int n = S.n();
    double res = 0.0;
    for (const auto& K : mi::all(S.chart()->dim(), 2))
        if (K[1] < n) res = std::max(res, in_frame.coeff(K).max_abs());
    return TwistForm{theta, res, res < tol};
}

bool is_basic_scalar(const FIStructure& S, const ScalarField& f, double tol) {
    for (int j = 0; j < S.n(); ++j)
        if (apply_vector(S.X(j), f).max_abs() >= tol) return false;
    return true;
}

bool is_basic_form(const FIStructure& S, const Form& form, double tol) {
    if (!S.normal_form()) throw Error("is_basic_form needs a normal-form chart");
    Form in_frame = change_basis(to_coordinate_basis(form), S.coframe());
    const int n = S.n(), dim = S.chart()->dim();
    for (const auto& K : mi::all(dim, form.degree())) {
        bool pure_theta = true;
        for (int v : K) pure_theta = pure_theta && v >= n;
        const auto& c = in_frame.coeff(K);
        if (!pure_theta) {
            if (c.max_abs() >= tol) return false;
        } else {
            if (!is_basic_scalar(S, c, tol)) return false;
        }
    }
    return true;
}

// --- bundles ----------------------------------------------------------------

BasicBundle BasicBundle::trivial(StructurePtr S, int rank) {
    BasicBundle b;
    b.structure_ = std::move(S);
    b.rank_ = rank;
    b.num_triv_ = 1;
    return b;
}

BasicBundle BasicBundle::with_transitions(
    StructurePtr S, int rank, std::vector<std::vector<std::vector<ScalarField>>> transitions,
    double tol) {
    BasicBundle b;
    b.structure_ = S;
    b.rank_ = rank;
    b.num_triv_ = int(transitions.size());
    b.transitions_ = std::move(transitions);
    const auto chart = S->chart();
    auto at = [&](int a, int bx, int r, int c) -> const ScalarField& {
        return b.transitions_[a][bx][r * rank + c];
    };
    for (int a = 0; a < b.num_triv_; ++a)
        for (int bx = 0; bx < b.num_triv_; ++bx)
            for (int cx = 0; cx < b.num_triv_; ++cx)
                for (int r = 0; r < rank; ++r)
                    for (int c = 0; c < rank; ++c) {
                        ScalarField acc = ScalarField::constant(chart, 0.0);
                        for (int s = 0; s < rank; ++s)
                            acc = acc + at(a, bx, r, s) * at(bx, cx, s, c);
                        b.cocycle_residual_ =
                            std::max(b.cocycle_residual_, (acc - at(a, cx, r, c)).max_abs());
                    }
    for (int a = 0; a < b.num_triv_; ++a)
        for (int bx = 0; bx < b.num_triv_; ++bx)
            for (int r = 0; r < rank; ++r)
                for (int c = 0; c < rank; ++c)
                    for (int j = 0; j < S->n(); ++j)
                        b.basic_residual_ = std::max(
                            b.basic_residual_, apply_vector(S->X(j), at(a, bx, r, c)).max_abs());
    if (b.cocycle_residual_ > tol) throw Error("bundle transitions violate the cocycle identity");
    if (b.basic_residual_ > tol) throw Error("bundle transitions are not basic");
    return b;
}

// --- (m,q) coefficients -------------------------------------------------------

MqForm MqForm::zero(StructurePtr S, int q, int rank) {
    MqForm u;
    u.structure = std::move(S);
    u.q = q;
    u.rank = rank;
    long long nj = mi::choose(u.structure->n(), q);
    u.coeffs.assign(std::size_t(rank * nj), ScalarField::constant(u.structure->chart(), 0.0));
    return u;
}

double MqForm::max_abs() const {
    double v = 0.0;
    for (const auto& c : coeffs) v = std::max(v, c.max_abs());
    return v;
}

MqForm MqForm::operator+(const MqForm& o) const {
    MqForm out = *this;
    for (std::size_t i = 0; i < coeffs.size(); ++i) out.coeffs[i] = coeffs[i] + o.coeffs[i];
    return out;
}
MqForm MqForm::operator-(const MqForm& o) const {
    MqForm out = *this;
    for (std::size_t i = 0; i < coeffs.size(); ++i) out.coeffs[i] = coeffs[i] - o.coeffs[i];
    return out;
}
MqForm MqForm::operator*(cplx s) const {
    MqForm out = *this;
    for (auto& c : out.coeffs) c = c * s;
    return out;
}

QuotientForm QuotientForm::zero(StructurePtr S, int q) {
    QuotientForm u;
    u.structure = std::move(S);
    u.q = q;
    long long nj = mi::choose(u.structure->n(), q);
    u.coeffs.assign(std::size_t(nj), ScalarField::constant(u.structure->chart(), 0.0));
    return u;
}

double QuotientForm::max_abs() const {
    double v = 0.0;
    for (const auto& c : coeffs) v = std::max(v, c.max_abs());
    return v;
}

QuotientForm QuotientForm::operator-(const QuotientForm& o) const {
    QuotientForm out = *this;
    for (std::size_t i = 0; i < coeffs.size(); ++i) out.coeffs[i] = coeffs[i] - o.coeffs[i];
    return out;
}

std::vector<Form> mq_to_full(const MqForm& u) {
    const auto& S = *u.structure;
    auto Js = mi::all(S.n(), u.q);
    std::vector<Form> full;
    for (int a = 0; a < u.rank; ++a) {
        Form f(S.chart(), S.m() + u.q);
        for (std::size_t ji = 0; ji < Js.size(); ++ji) {
            Form w = S.theta_top();
            for (int j : Js[ji]) w = wedge(w, S.omega(j));
            f = f + w * u.coeff(a, (long long)ji);
        }
        full.push_back(std::move(f));
    }
    return full;
}

MqForm mq_from_full(StructurePtr S, int q, const std::vector<Form>& full, double* leakage) {
    const int n = S->n(), m = S->m(), dim = S->chart()->dim();
    MqForm out = MqForm::zero(S, q, int(full.size()));
    if (leakage) *leakage = 0.0;
    // Theta ^ omega^J = (-1)^{m|J|} eta_{J cup thetas} in the coframe basis.
    const double sign = (m * q) % 2 == 0 ? 1.0 : -1.0;
    for (int a = 0; a < int(full.size()); ++a) {
        Form in_frame = change_basis(full[a], S->coframe());
        for (const auto& K : mi::all(dim, m + q)) {
            int thetas = 0;
            mi::Index J;
            for (int v : K)
                if (v >= n) ++thetas;
                else J.push_back(v);
            if (thetas == m) {
                out.coeff(a, mi::rank(J, n)) = in_frame.coeff(K) * cplx(sign);
            } else if (leakage) {
                *leakage = std::max(*leakage, in_frame.coeff(K).max_abs());
            }
        }
    }
    return out;
}

MqForm mnt_operator(const MqForm& u, const StructureForms& forms, const TwistForm& twist,
                    double* leakage) {
    const auto& S = u.structure;
    if (!twist.valid) throw InvalidTwist(twist.residual);
    if (u.q >= S->n()) return MqForm::zero(S, u.q + 1, u.rank);

    auto full = mq_to_full(u);
    std::vector<Form> image;
    for (auto& f : full) {
        Form df = exterior_derivative(f);
        df = df - wedge(forms.trace, f) - wedge(twist.form, f);
        image.push_back(std::move(df));
    }
    return mq_from_full(S, u.q + 1, image, leakage);
}

MqForm mnt_operator(const MqForm& u, const StructureForms& forms, const TwistForm& twist) {
    return mnt_operator(u, forms, twist, nullptr);
}

MqForm bv_difference(const MqForm& u, const std::vector<ScalarField>& f_matrix) {
    const auto& S = u.structure;
    const int r = u.rank;
    const auto chart = S->chart();
    if (int(f_matrix.size()) != r * r) throw Error("bv_difference: frame change must be r x r");

    std::vector<ScalarField> finv(std::size_t(r * r), ScalarField::constant(chart, 0.0));
    {
        Eigen::MatrixXcd F(r, r);
        std::vector<Eigen::VectorXcd> cols(std::size_t(r * r),
                                           Eigen::VectorXcd(Eigen::Index(chart->points())));
        for (std::size_t p = 0; p < chart->points(); ++p) {
            for (int i = 0; i < r; ++i)
                for (int j = 0; j < r; ++j) F(i, j) = f_matrix[i * r + j](p);
            Eigen::MatrixXcd Fi = F.inverse();
            for (int i = 0; i < r; ++i)
                for (int j = 0; j < r; ++j) cols[i * r + j](Eigen::Index(p)) = Fi(i, j);
        }
        for (int i = 0; i < r * r; ++i) finv[std::size_t(i)] = ScalarField(chart, std::move(cols[std::size_t(i)]));
    }

    auto full = mq_to_full(u);
    const double sgn = ((u.q + S->m()) % 2 == 0) ? 1.0 : -1.0;
    std::vector<Form> image;
    for (int a = 0; a < r; ++a) {
        Form acc(chart, S->m() + u.q + 1);
        for (int b = 0; b < r; ++b) {
            for (int c = 0; c < r; ++c) {
                Form dfinv = exterior_derivative(Form::scalar(finv[b * r + c]));
                acc = acc + wedge(full[b], dfinv) * f_matrix[c * r + a];
            }
        }
        image.push_back(acc * cplx(sgn));
    }
    return mq_from_full(S, u.q + 1, image);
}

// --- quotient complex ---------------------------------------------------------

QuotientForm quotient_project(StructurePtr S, const Form& u) {
    Form in_frame = change_basis(to_coordinate_basis(u), S->coframe());
    const int n = S->n(), dim = S->chart()->dim();
    QuotientForm out = QuotientForm::zero(S, u.degree());
    for (const auto& K : mi::all(dim, u.degree())) {
        bool pure_omega = true;
        for (int v : K) pure_omega = pure_omega && v < n;
        if (pure_omega) out.coeffs[std::size_t(mi::rank(K, n))] = in_frame.coeff(K);
    }
    return out;
}

QuotientForm mnt_quotient_operator(const QuotientForm& u, const TwistForm& twist) {
    const auto& S = u.structure;
    if (!S) throw Error("quotient form lacks a structure reference");
    if (!twist.valid) throw InvalidTwist(twist.residual);
    const int n = S->n();
    if (u.q >= n) return QuotientForm::zero(S, u.q + 1);
    const auto chart = S->chart();

    // bracket coefficients: [X_j, X_k] paired against the omegas
    std::vector<std::vector<std::vector<ScalarField>>> c(n,
                                                         std::vector<std::vector<ScalarField>>(n));
    for (int j = 0; j < n; ++j)
        for (int k = j + 1; k < n; ++k) {
            auto br = lie_bracket(S->X(j), S->X(k));
            std::vector<ScalarField> comps;
            for (int l = 0; l < n; ++l) {
                ScalarField pair = ScalarField::constant(chart, 0.0);
                for (int nu = 0; nu < chart->dim(); ++nu)
                    pair = pair + S->omega(l).coeff(mi::Index{nu}) * br.component(nu);
                comps.push_back(pair);
            }
            c[j][k] = comps;
        }

    std::vector<ScalarField> tv;
    for (int j = 0; j < n; ++j) {
        ScalarField pair = ScalarField::constant(chart, 0.0);
        for (int nu = 0; nu < chart->dim(); ++nu)
            pair = pair + twist.form.coeff(mi::Index{nu}) * S->X(j).component(nu);
        tv.push_back(pair);
    }

    auto Jps = mi::all(n, u.q + 1);
    QuotientForm out = QuotientForm::zero(S, u.q + 1);
    for (std::size_t oi = 0; oi < Jps.size(); ++oi) {
        const auto& Jp = Jps[oi];
        ScalarField acc = ScalarField::constant(chart, 0.0);
        for (std::size_t i = 0; i < Jp.size(); ++i) {
            mi::Index rest;
            for (std::size_t t = 0; t < Jp.size(); ++t)
                if (t != i) rest.push_back(Jp[t]);
            double si = (i % 2 == 0) ? 1.0 : -1.0;
            const auto& uc = u.coeffs[std::size_t(mi::rank(rest, n))];
            acc = acc + apply_vector(S->X(Jp[i]), uc) * cplx(si);
            acc = acc - tv[std::size_t(Jp[i])] * uc * cplx(si);
        }
        for (std::size_t i = 0; i < Jp.size(); ++i) {
            for (std::size_t k = i + 1; k < Jp.size(); ++k) {
                double sik = ((i + k) % 2 == 0) ? 1.0 : -1.0;
                mi::Index rest;
                for (std::size_t t = 0; t < Jp.size(); ++t)
                    if (t != i && t != k) rest.push_back(Jp[t]);
                for (int l = 0; l < n; ++l) {
                    auto [sl, K] = mi::insert(l, rest);
                    if (sl == 0) continue;
                    acc = acc +
                          c[Jp[i]][Jp[k]][l] * u.coeffs[std::size_t(mi::rank(K, n))] *
                              cplx(sik * double(sl));
                }
            }
        }
        out.coeffs[oi] = acc;
    }
    return out;
}

QuotientForm phi_iso(const MqForm& u) {
    if (u.rank != 1) throw Error("phi_iso expects a line-bundle-valued form");
    const double sign = ((u.q * u.structure->m()) % 2 == 0) ? 1.0 : -1.0;
    QuotientForm out = QuotientForm::zero(u.structure, u.q);
    for (std::size_t i = 0; i < out.coeffs.size(); ++i) out.coeffs[i] = u.coeffs[i] * cplx(sign);
    return out;
}

} // namespace fiskit
