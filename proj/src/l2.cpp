#include "fiskit/l2.hpp"

#include <Eigen/SVD>
#include <cstdio>
#include <filesystem>
#include <fstream>

namespace fiskit {

Eigen::VectorXcd DiscreteComplex::pack(const MqForm& u) const {
    const auto P = Eigen::Index(structure->chart()->points());
    Eigen::VectorXcd v(level_dim(u.q));
    for (std::size_t i = 0; i < u.coeffs.size(); ++i)
        v.segment(Eigen::Index(i) * P, P) = u.coeffs[i].data();
    return v;
}

MqForm DiscreteComplex::unpack(int q, const Eigen::VectorXcd& v) const {
    const auto P = Eigen::Index(structure->chart()->points());
    MqForm u = MqForm::zero(structure, q, rank);
    for (std::size_t i = 0; i < u.coeffs.size(); ++i)
        u.coeffs[i] = ScalarField(structure->chart(), v.segment(Eigen::Index(i) * P, P));
    return u;
}

double DiscreteComplex::wnorm(int q, const Eigen::VectorXcd& v) const {
    return std::sqrt(std::real(wdot(q, v, v)));
}

cplx DiscreteComplex::wdot(int q, const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) const {
    // <a, b>_W = sum W_i a_i conj(b_i)
    return b.dot(W[std::size_t(q)].cast<cplx>().cwiseProduct(a));
}

namespace {

// triplet contributions of the operator field * X_j acting on one block
void add_vector_field_block(std::vector<Eigen::Triplet<cplx>>& trips, const VectorField& X,
                            cplx scale, Eigen::Index row0, Eigen::Index col0,
                            const ChartPtr& chart) {
    const auto P = chart->points();
    for (int axis = 0; axis < chart->dim(); ++axis) {
        const auto& comp = X.component(axis);
        if (comp.max_abs() < 1e-15) continue;
        const auto& D = chart->deriv_matrix(axis);
        const int N = chart->axis(axis).resolution;
        const std::size_t stride = chart->stride(axis);
        const std::size_t block = stride * std::size_t(N);
        for (std::size_t base = 0; base < P; base += block) {
            for (std::size_t off = 0; off < stride; ++off) {
                for (int i = 0; i < N; ++i) {
                    const std::size_t prow = base + off + stride * std::size_t(i);
                    const cplx coeff = comp(prow) * scale;
                    if (std::abs(coeff) < 1e-15) continue;
                    for (int k = 0; k < N; ++k) {
                        const cplx dv = D(i, k);
                        if (std::abs(dv) < 1e-15) continue;
                        const std::size_t pcol = base + off + stride * std::size_t(k);
                        trips.emplace_back(row0 + Eigen::Index(prow),
                                           col0 + Eigen::Index(pcol), coeff * dv);
                    }
                }
            }
        }
    }
}

void add_diagonal_block(std::vector<Eigen::Triplet<cplx>>& trips, const ScalarField& field,
                        cplx scale, Eigen::Index row0, Eigen::Index col0) {
    for (std::size_t p = 0; p < field.size(); ++p) {
        cplx v = field(p) * scale;
        if (std::abs(v) < 1e-15) continue;
        trips.emplace_back(row0 + Eigen::Index(p), col0 + Eigen::Index(p), v);
    }
}

} // namespace

DiscreteComplex assemble(StructurePtr S, const StructureForms& forms, const TwistForm& twist,
                         const BasicBundle& E, const ScalarField& weight, double clip) {
    if (!twist.valid) throw InvalidTwist(twist.residual);
    require_real(weight, "complex weight");
    const auto chart = S->chart();
    const int n = S->n(), m = S->m();
    const auto P = Eigen::Index(chart->points());

    DiscreteComplex C;
    C.structure = S;
    C.rank = E.rank();
    C.clip_bound = clip;
    {
        Eigen::VectorXcd w = weight.data();
        for (Eigen::Index i = 0; i < w.size(); ++i) {
            double v = std::clamp(w(i).real(), -clip, clip);
            w(i) = v;
        }
        C.weight_field = ScalarField(chart, std::move(w));
    }

    // level weights: e^{-w} * cell volume, replicated across (a, J)
    for (int q = 0; q <= n; ++q) {
        Eigen::VectorXd Wq(C.level_dim(q));
        Eigen::VectorXd cell =
            (-C.weight_field.data().real()).array().exp() * chart->cell_volume();
        for (int blk = 0; blk < C.rank * C.num_indices(q); ++blk)
            Wq.segment(Eigen::Index(blk) * P, P) = cell;
        C.W.push_back(std::move(Wq));
    }

    const double msign = (m % 2 == 0) ? 1.0 : -1.0;
    for (int q = 0; q < n; ++q) {
        auto Js = mi::all(n, q);
        auto Jps = mi::all(n, q + 1);
        std::vector<Eigen::Triplet<cplx>> trips;

        // zero-order coefficient fields from (d - Xi - theta^)(Theta ^ omega^J)
        const double osign = (m * (q + 1)) % 2 == 0 ? 1.0 : -1.0;
        std::vector<std::vector<ScalarField>> Z(
            Jps.size(), std::vector<ScalarField>(Js.size(),
                                                 ScalarField::constant(chart, 0.0)));
        for (std::size_t ji = 0; ji < Js.size(); ++ji) {
            Form w = S->theta_top();
            for (int j : Js[ji]) w = wedge(w, S->omega(j));
            Form z = exterior_derivative(w);
            z = z - wedge(forms.trace, w) - wedge(twist.form, w);
            Form in_frame = change_basis(z, S->coframe());
            for (const auto& K : mi::all(chart->dim(), m + q + 1)) {
                int thetas = 0;
                mi::Index J2;
                for (int v : K)
                    if (v >= n) ++thetas;
                    else J2.push_back(v);
                if (thetas == m) {
                    Z[std::size_t(mi::rank(J2, n))][ji] = in_frame.coeff(K) * cplx(osign);
                } else {
                    C.assembly_residual =
                        std::max(C.assembly_residual, in_frame.coeff(K).max_abs());
                }
            }
        }

        for (int a = 0; a < C.rank; ++a) {
            for (std::size_t ji = 0; ji < Js.size(); ++ji) {
                const Eigen::Index col0 = (Eigen::Index(a) * Eigen::Index(Js.size()) +
                                           Eigen::Index(ji)) * P;
                // first order: (-1)^m sgn X_j
                for (int j = 0; j < n; ++j) {
                    auto [sgn, J2] = mi::insert(j, Js[ji]);
                    if (sgn == 0) continue;
                    const Eigen::Index row0 =
                        (Eigen::Index(a) * Eigen::Index(Jps.size()) +
                         Eigen::Index(mi::rank(J2, n))) * P;
                    add_vector_field_block(trips, S->X(j), cplx(msign * double(sgn)), row0,
                                           col0, chart);
                }
                // zero order
                for (std::size_t jo = 0; jo < Jps.size(); ++jo) {
                    if (Z[jo][ji].max_abs() < 1e-15) continue;
                    const Eigen::Index row0 = (Eigen::Index(a) * Eigen::Index(Jps.size()) +
                                               Eigen::Index(jo)) * P;
                    add_diagonal_block(trips, Z[jo][ji], 1.0, row0, col0);
                }
            }
        }
        SparseCd D(C.level_dim(q + 1), C.level_dim(q));
        D.setFromTriplets(trips.begin(), trips.end());
        C.D.push_back(std::move(D));
    }
    return C;
}

SparseCd adjoint(const DiscreteComplex& C, int q) {
    if (q < 0 || q >= int(C.D.size())) throw Error("adjoint: level out of range");
    const auto& D = C.D[std::size_t(q)];
    Eigen::VectorXd w0inv = C.W[std::size_t(q)].cwiseInverse();
    SparseCd A = SparseCd(D.adjoint());
    A = w0inv.cast<cplx>().asDiagonal() * A;
    A = A * C.W[std::size_t(q + 1)].cast<cplx>().asDiagonal();
    A.makeCompressed();
    return A;
}

std::vector<SparseCd> assemble_quotient(StructurePtr S, const TwistForm& twist) {
    if (!twist.valid) throw InvalidTwist(twist.residual);
    const auto chart = S->chart();
    const int n = S->n();
    const auto P = Eigen::Index(chart->points());

    // bracket projections and the twist pairings
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

    std::vector<SparseCd> out;
    for (int q = 0; q < n; ++q) {
        auto Js = mi::all(n, q);
        auto Jps = mi::all(n, q + 1);
        std::vector<Eigen::Triplet<cplx>> trips;
        for (std::size_t oi = 0; oi < Jps.size(); ++oi) {
            const auto& Jp = Jps[oi];
            const Eigen::Index row0 = Eigen::Index(oi) * P;
            for (std::size_t i = 0; i < Jp.size(); ++i) {
                mi::Index rest;
                for (std::size_t t2 = 0; t2 < Jp.size(); ++t2)
                    if (t2 != i) rest.push_back(Jp[t2]);
                const double si = (i % 2 == 0) ? 1.0 : -1.0;
                const Eigen::Index col0 = Eigen::Index(mi::rank(rest, n)) * P;
                add_vector_field_block(trips, S->X(Jp[i]), cplx(si), row0, col0, chart);
                add_diagonal_block(trips, tv[std::size_t(Jp[i])], cplx(-si), row0, col0);
            }
            for (std::size_t i = 0; i < Jp.size(); ++i) {
                for (std::size_t k = i + 1; k < Jp.size(); ++k) {
                    const double sik = ((i + k) % 2 == 0) ? 1.0 : -1.0;
                    mi::Index rest;
                    for (std::size_t t2 = 0; t2 < Jp.size(); ++t2)
                        if (t2 != i && t2 != k) rest.push_back(Jp[t2]);
                    for (int l = 0; l < n; ++l) {
                        auto [sl, K] = mi::insert(l, rest);
                        if (sl == 0) continue;
                        const Eigen::Index col0 = Eigen::Index(mi::rank(K, n)) * P;
                        add_diagonal_block(trips, c[Jp[i]][Jp[k]][l],
                                           cplx(sik * double(sl)), row0, col0);
                    }
                }
            }
        }
        SparseCd M(Eigen::Index(Jps.size()) * P, Eigen::Index(Js.size()) * P);
        M.setFromTriplets(trips.begin(), trips.end());
        out.push_back(std::move(M));
    }
    return out;
}

BochnerReport bochner_check(const DiscreteComplex& C, const ScalarField& phi,
                            const std::vector<std::vector<std::vector<ScalarField>>>& e,
                            const MqForm& g) {
    const auto& S = C.structure;
    const auto chart = S->chart();
    const int n = S->n(), q = g.q;
    require_real(phi, "weight");

    // compact support: demand an empty slice along every axis
    {
        double gmax = g.max_abs();
        for (int axis = 0; axis < chart->dim(); ++axis) {
            const int N = chart->axis(axis).resolution;
            bool has_empty = false;
            for (int i = 0; i < N && !has_empty; ++i) {
                double slice = 0.0;
                for (std::size_t p = 0; p < chart->points(); ++p)
                    if (chart->unflatten(p)[axis] == i)
                        for (const auto& cf : g.coeffs) slice = std::max(slice, std::abs(cf(p)));
                has_empty = slice <= 1e-10 * std::max(1.0, gmax);
            }
            if (!has_empty)
                throw Error("test form support touches the box boundary");
        }
    }

    BochnerReport rep;
    Eigen::VectorXcd v = C.pack(g);
    if (q < n) {
        Eigen::VectorXcd dv = C.D[std::size_t(q)] * v;
        rep.lhs += std::pow(C.wnorm(q + 1, dv), 2);
    }
    if (q > 0) {
        Eigen::VectorXcd sv = adjoint(C, q - 1) * v;
        rep.lhs += std::pow(C.wnorm(q - 1, sv), 2);
    }

    Eigen::VectorXd wv = C.W[std::size_t(q)].segment(0, Eigen::Index(chart->points()));
    // curvature entries H_jk = X_j conj(X_k) phi + sum e conj(X_l) phi
    std::vector<ScalarField> Xbar_phi;
    for (int j = 0; j < n; ++j) Xbar_phi.push_back(apply_vector(S->X(j).conjugate(), phi));
    std::vector<std::vector<ScalarField>> H(n, std::vector<ScalarField>(n));
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            ScalarField entry = apply_vector(S->X(j), Xbar_phi[std::size_t(k)]);
            for (int l = 0; l < n; ++l) entry = entry + e[j][k][l] * Xbar_phi[std::size_t(l)];
            H[j][k] = entry;
        }

    auto Ks = mi::all(n, q - 1 >= 0 ? q - 1 : 0);
    if (q >= 1) {
        double qterm = 0.0;
        for (int a = 0; a < g.rank; ++a) {
            for (const auto& K : Ks) {
                for (int j = 0; j < n; ++j) {
                    auto [sj, Jj] = mi::insert(j, K);
                    if (sj == 0) continue;
                    for (int k = 0; k < n; ++k) {
                        auto [sk, Jk] = mi::insert(k, K);
                        if (sk == 0) continue;
                        const auto& gk = g.coeff(a, mi::rank(Jk, n));
                        const auto& gj = g.coeff(a, mi::rank(Jj, n));
                        for (std::size_t p = 0; p < chart->points(); ++p) {
                            cplx val = H[j][k](p) * gk(p) * double(sk) *
                                       std::conj(gj(p) * double(sj));
                            qterm += std::real(val) * wv(Eigen::Index(p));
                        }
                    }
                }
            }
        }
        rep.q_term = qterm;
    }

    double grad = 0.0;
    for (int a = 0; a < g.rank; ++a)
        for (long long ji = 0; ji < g.num_indices(); ++ji)
            for (int j = 0; j < n; ++j) {
                auto Xg = apply_vector(S->X(j), g.coeff(a, ji));
                for (std::size_t p = 0; p < chart->points(); ++p)
                    grad += std::norm(Xg(p)) * wv(Eigen::Index(p));
            }
    rep.gradient_term = grad;
    rep.g_norm = C.wnorm(q, v);
    rep.gradient_norm = std::sqrt(grad + rep.g_norm * rep.g_norm);
    rep.remainder = rep.lhs - rep.q_term - rep.gradient_term;
    rep.c_hat = std::abs(rep.remainder) / std::max(1e-300, rep.gradient_norm * rep.g_norm);
    return rep;
}

AprioriReport apriori_check(const DiscreteComplex& C, int q, int samples, Rng& rng,
                            const ScalarField& window, int kmax) {
    const auto& S = C.structure;
    // the clipped weight region must stay clear of the sample support
    {
        double wmax = window.max_abs();
        for (std::size_t p = 0; p < S->chart()->points(); ++p) {
            if (std::abs(window(p)) <= 1e-13 * std::max(1.0, wmax)) continue;
            if (std::abs(C.weight_field(p).real()) >= C.clip_bound - 1e-9)
                throw Error("weight clipping region intersects the test data support");
        }
    }
    AprioriReport rep;
    rep.samples = samples;
    rep.worst_slack = std::numeric_limits<double>::infinity();
    SparseCd adj = (q >= 1) ? adjoint(C, q - 1) : SparseCd();
    for (int s = 0; s < samples; ++s) {
        MqForm g = MqForm::zero(S, q, C.rank);
        for (auto& cf : g.coeffs) cf = window * band_limited_field(S->chart(), kmax, rng);
        Eigen::VectorXcd v = C.pack(g);
        double nv = C.wnorm(q, v);
        if (nv < 1e-300) continue;
        v /= nv;
        double rhs = 0.0;
        if (q >= 1) {
            Eigen::VectorXcd tv = adj * v;
            rhs += std::pow(C.wnorm(q - 1, tv), 2);
        }
        if (q < S->n()) {
            Eigen::VectorXcd sv = C.D[std::size_t(q)] * v;
            rhs += std::pow(C.wnorm(q + 1, sv), 2);
        }
        double slack = rhs - 1.0;
        rep.worst_slack = std::min(rep.worst_slack, slack);
        if (slack >= -1e-8) ++rep.passed;
    }
    return rep;
}

std::pair<Eigen::VectorXcd, SolveReport> solve_least_norm(const SparseCd& D,
                                                          const Eigen::VectorXd& W_dom,
                                                          const Eigen::VectorXd& W_cod,
                                                          const Eigen::VectorXcd& f,
                                                          double tol, int max_iter_factor) {
    // Symmetric scaling B = Wc^{1/2} D Wd^{-1/2}, then CGLS on the normal
    // equations B^H B x = B^H b. The scaling equilibrates the weight part of
    // the conditioning, and the iterates stay in range(B^H), so the returned
    // u is the minimum-W-norm least squares solution; 2-norms in the scaled
    // space are exactly the W-norms.
    Eigen::VectorXd wc_h = W_cod.cwiseSqrt();
    Eigen::VectorXd wd_h = W_dom.cwiseSqrt();
    Eigen::VectorXd wd_hi = wd_h.cwiseInverse();

    auto applyB = [&](const Eigen::VectorXcd& x) -> Eigen::VectorXcd {
        return wc_h.cast<cplx>().cwiseProduct(D * wd_hi.cast<cplx>().cwiseProduct(x));
    };
    auto applyBH = [&](const Eigen::VectorXcd& y) -> Eigen::VectorXcd {
        return wd_hi.cast<cplx>().cwiseProduct(D.adjoint() *
                                               wc_h.cast<cplx>().cwiseProduct(y));
    };

    double bnorm2_max = 0.0;
    {
        Eigen::VectorXd colnorm2 = Eigen::VectorXd::Zero(D.cols());
        for (int k = 0; k < D.outerSize(); ++k)
            for (SparseCd::InnerIterator it(D, k); it; ++it)
                colnorm2(it.col()) += std::norm(it.value()) * W_cod(it.row());
        for (Eigen::Index i = 0; i < colnorm2.size(); ++i)
            bnorm2_max = std::max(bnorm2_max, colnorm2(i) / W_dom(i));
    }

    Eigen::VectorXcd b = wc_h.cast<cplx>().cwiseProduct(f);
    Eigen::VectorXcd x = Eigen::VectorXcd::Zero(D.cols());
    Eigen::VectorXcd r = b;
    Eigen::VectorXcd s = applyBH(r);
    const double s0n = s.norm();
    const double scale = std::sqrt(bnorm2_max) * std::max(1e-300, b.norm());
    const double stop = tol * std::max(1e-300, s0n);
    const int max_iter = max_iter_factor * int(D.cols());

    Eigen::VectorXcd xbest = x;
    double sbest = s0n;
    int it = 0;
    if (s0n > 1e-13 * scale) {
        Eigen::VectorXcd p = s;
        double gamma = s.squaredNorm();
        int since_improve = 0;
        for (; it < max_iter; ++it) {
            double sn = s.norm();
            if (sn < sbest) {
                sbest = sn;
                xbest = x;
                since_improve = 0;
            } else if (++since_improve > 100) {
                break; // round-off floor reached
            }
            if (sn <= stop) break;
            Eigen::VectorXcd qv = applyB(p);
            double qn2 = qv.squaredNorm();
            if (qn2 <= 1e-300 || gamma <= 1e-300) break;
            double alpha = gamma / qn2;
            x += alpha * p;
            r -= alpha * qv;
            s = applyBH(r);
            double gnew = s.squaredNorm();
            if (!std::isfinite(gnew)) break;
            p = s + (gnew / gamma) * p;
            gamma = gnew;
        }
        if (it >= max_iter && sbest > 1e-6 * s0n) throw IllConditioned(sbest / s0n);
    }

    r = b - applyB(xbest);
    SolveReport rep;
    rep.iterations = it;
    rep.residual = applyBH(r).norm();
    rep.obstruction = r.norm();       // = |D u - f|_{W_cod}
    rep.solution_norm = xbest.norm(); // = |u|_{W_dom}
    return {wd_hi.cast<cplx>().cwiseProduct(xbest), rep};
}

std::pair<MqForm, SolveReport> solve(const DiscreteComplex& C, int q, const MqForm& f,
                                     double tol, int max_iter_factor) {
    if (q < 1 || q > C.structure->n()) throw Error("solve: level out of range");
    Eigen::VectorXcd fv = C.pack(f);
    double fn = C.wnorm(q, fv);
    if (q < C.structure->n()) {
        Eigen::VectorXcd dfv = C.D[std::size_t(q)] * fv;
        double closed = C.wnorm(q + 1, dfv);
        if (closed > 1e-8 * std::max(1e-300, fn)) throw NotClosed(closed / std::max(1e-300, fn));
    }
    auto [u, rep] = solve_least_norm(C.D[std::size_t(q - 1)], C.W[std::size_t(q - 1)],
                                     C.W[std::size_t(q)], fv, tol, max_iter_factor);
    return {C.unpack(q - 1, u), rep};
}

LeafwiseReport leafwise_cohomology(StructurePtr S, const TwistForm& twist, int q) {
    LeafwiseReport rep;
    rep.q = q;
    const int n = S->n();
    {
        std::vector<VectorField> both = S->v_frame();
        for (const auto& X : S->v_frame()) both.push_back(X.conjugate());
        auto [rmin, rmax] = pointwise_rank(both);
        if (rmin == n && rmax == n) rep.classification = "essentially-real";
        else if (rmin == 2 * n && rmax == 2 * n) rep.classification = "levi-flat-cr";
        else throw Error("leafwise_cohomology: structure is neither essentially real nor "
                         "a Levi flat CR structure");
    }
    auto Ms = assemble_quotient(S, twist);
    auto rank_of = [](const SparseCd& M) -> Eigen::Index {
        Eigen::MatrixXcd dense = Eigen::MatrixXcd(M);
        Eigen::BDCSVD<Eigen::MatrixXcd> svd(dense);
        const auto& sv = svd.singularValues();
        if (sv.size() == 0) return 0;
        double cut = 1e-8 * sv(0);
        Eigen::Index r = 0;
        for (Eigen::Index i = 0; i < sv.size(); ++i)
            if (sv(i) > cut) ++r;
        return r;
    };
    if (q < n) {
        rep.rank_out = rank_of(Ms[std::size_t(q)]);
        rep.dim_kernel = Ms[std::size_t(q)].cols() - rep.rank_out;
    } else {
        // top level: the outgoing map is zero
        rep.rank_out = 0;
        rep.dim_kernel = Eigen::Index(mi::choose(n, q)) *
                         Eigen::Index(S->chart()->points());
    }
    rep.rank_in = (q >= 1) ? rank_of(Ms[std::size_t(q - 1)]) : 0;
    rep.defect = rep.dim_kernel - rep.rank_in;
    return rep;
}

void write_matrix_market(const SparseCd& M, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    out << "%%MatrixMarket matrix coordinate complex general\n";
    out << M.rows() << " " << M.cols() << " " << M.nonZeros() << "\n";
    char buf[128];
    for (int k = 0; k < M.outerSize(); ++k)
        for (SparseCd::InnerIterator it(M, k); it; ++it) {
            std::snprintf(buf, sizeof buf, "%ld %ld %.17g %.17g\n", long(it.row() + 1),
                          long(it.col() + 1), it.value().real(), it.value().imag());
            out << buf;
        }
}

void export_matrix_market(const DiscreteComplex& C, const std::string& dir,
                          const std::string& prefix) {
    std::filesystem::create_directories(dir);
    for (std::size_t q = 0; q < C.D.size(); ++q)
        write_matrix_market(C.D[q],
                            dir + "/" + prefix + "_D" + std::to_string(q) + ".mtx");
    for (std::size_t q = 0; q < C.W.size(); ++q) {
        std::ofstream out(dir + "/" + prefix + "_W" + std::to_string(q) + ".mtx");
        if (!out) throw Error("cannot write weight matrix");
        out << "%%MatrixMarket matrix coordinate real general\n";
        out << C.W[q].size() << " " << C.W[q].size() << " " << C.W[q].size() << "\n";
        char buf[96];
        for (Eigen::Index i = 0; i < C.W[q].size(); ++i) {
            std::snprintf(buf, sizeof buf, "%ld %ld %.17g\n", long(i + 1), long(i + 1),
                          C.W[q](i));
            out << buf;
        }
    }
}

} // namespace fiskit
