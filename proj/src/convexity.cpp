#include "fiskit/convexity.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <cmath>

namespace fiskit {

HermitianField::HermitianField(ChartPtr chart, int n)
    : chart_(std::move(chart)), n_(n),
      mats_(chart_->points(), Eigen::MatrixXcd::Zero(n, n)) {}

double HermitianField::hermitian_residual() const {
    double worst = 0.0;
    for (const auto& A : mats_)
        worst = std::max(worst, (A - A.adjoint()).cwiseAbs().maxCoeff());
    return worst;
}

bool HermitianField::is_positive(double tol) const { return min_eigenvalue() > tol; }

double HermitianField::min_eigenvalue(const std::vector<std::uint8_t>* mask) const {
    double lo = std::numeric_limits<double>::infinity();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es;
    for (std::size_t p = 0; p < mats_.size(); ++p) {
        if (mask && !(*mask)[p]) continue;
        es.compute(mats_[p], Eigen::EigenvaluesOnly);
        lo = std::min(lo, es.eigenvalues()(0));
    }
    return lo;
}

LineBundleMetric LineBundleMetric::single(StructurePtr S, ScalarField phi, int tau) {
    require_real(phi, "line bundle weight");
    LineBundleMetric h;
    h.structure = std::move(S);
    h.weights = {std::move(phi)};
    h.cocycle = {{ScalarField::constant(h.structure->chart(), 1.0)}};
    h.tau = tau;
    if (tau < 1) throw Error("bundle power tau must be >= 1");
    return h;
}

LineBundleMetric LineBundleMetric::with_cocycle(StructurePtr S,
                                                std::vector<ScalarField> weights,
                                                std::vector<std::vector<ScalarField>> cocycle,
                                                int tau, double tol) {
    LineBundleMetric h;
    h.structure = S;
    h.weights = std::move(weights);
    h.cocycle = std::move(cocycle);
    h.tau = tau;
    if (tau < 1) throw Error("bundle power tau must be >= 1");
    const auto chart = S->chart();
    const int nt = int(h.weights.size());
    for (auto& w : h.weights) require_real(w, "line bundle weight");
    for (int a = 0; a < nt; ++a) {
        for (int b = 0; b < nt; ++b) {
            const auto& g = h.cocycle.at(a).at(b);
            for (int j = 0; j < S->n(); ++j)
                if (apply_vector(S->X(j), g).max_abs() > tol)
                    throw Error("line bundle cocycle entry is not basic");
            Eigen::VectorXcd lg(Eigen::Index(chart->points()));
            for (std::size_t p = 0; p < chart->points(); ++p) {
                double mod2 = std::norm(g(p));
                if (mod2 <= 0.0) throw Error("line bundle cocycle entry vanishes");
                lg(Eigen::Index(p)) = std::log(mod2);
            }
            ScalarField logmod(chart, std::move(lg));
            h.discrepancy =
                std::max(h.discrepancy, (h.weights[a] - h.weights[b] - logmod).max_abs());
        }
    }
    if (h.discrepancy > tol)
        throw Error("line bundle weights do not satisfy the cocycle discrepancy");
    return h;
}

namespace {

// Pointwise basis of V cap conj(V) as columns in C^dim: kernel vectors (a;b)
// of [X | -conj(X)] give X a = conj(X) b, i.e. vectors lying in both spans.
Eigen::MatrixXcd intersection_basis(const FIStructure& S, std::size_t p, double tol = 1e-8) {
    const int dim = S.chart()->dim(), n = S.n();
    Eigen::MatrixXcd A(dim, n), M(dim, 2 * n);
    for (int nu = 0; nu < dim; ++nu)
        for (int j = 0; j < n; ++j) {
            A(nu, j) = S.X(j).component(nu)(p);
            M(nu, j) = A(nu, j);
            M(nu, n + j) = -std::conj(A(nu, j));
        }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    double cutoff = tol * std::max(1.0, sv.size() ? sv(0) : 0.0);
    int kdim = 2 * n - int(sv.size());
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) <= cutoff) ++kdim;
    if (kdim == 0) return Eigen::MatrixXcd(dim, 0);
    Eigen::MatrixXcd kern = svd.matrixV().rightCols(kdim);
    return A * kern.topRows(n);
}

std::vector<ScalarField> frame_derivatives(const FIStructure& S, const ScalarField& phi,
                                           bool conjugated) {
    std::vector<ScalarField> out;
    for (int j = 0; j < S.n(); ++j) {
        auto X = conjugated ? S.X(j).conjugate() : S.X(j);
        out.push_back(apply_vector(X, phi));
    }
    return out;
}

} // namespace

CriticalMasks critical_sets(const FIStructure& S, const ScalarField& phi, double tol) {
    require_real(phi, "weight");
    const auto chart = S.chart();
    auto Xphi = frame_derivatives(S, phi, false);
    std::vector<ScalarField> grad;
    for (int nu = 0; nu < chart->dim(); ++nu) grad.push_back(partial_derivative(phi, nu));

    CriticalMasks out;
    out.K.assign(chart->points(), 0);
    out.C.assign(chart->points(), 0);
    for (std::size_t p = 0; p < chart->points(); ++p) {
        bool c_ok = true;
        for (int j = 0; j < S.n(); ++j) c_ok = c_ok && std::abs(Xphi[std::size_t(j)](p)) <= tol;
        out.C[p] = c_ok ? 1 : 0;

        Eigen::MatrixXcd B = intersection_basis(S, p);
        bool k_ok = true;
        for (int col = 0; col < B.cols(); ++col) {
            cplx dphi_v = 0.0;
            for (int nu = 0; nu < chart->dim(); ++nu) dphi_v += B(nu, col) * grad[std::size_t(nu)](p);
            double scale = std::max(1.0, B.col(col).norm());
            if (std::abs(dphi_v) > tol * scale) {
                k_ok = false;
                break;
            }
        }
        out.K[p] = k_ok ? 1 : 0;
        out.K_count += out.K[p];
        out.C_count += out.C[p];
    }
    return out;
}

HermitianField q_form(const FIStructure& S, const ScalarField& phi,
                      const std::vector<std::vector<std::vector<ScalarField>>>& e) {
    require_real(phi, "weight");
    const int n = S.n();
    if (int(e.size()) != n) throw Error("q_form: e-coefficients missing");
    auto Xbar_phi = frame_derivatives(S, phi, true);
    std::vector<std::vector<ScalarField>> H(n, std::vector<ScalarField>(n));
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            ScalarField entry = apply_vector(S.X(j), Xbar_phi[std::size_t(k)]);
            for (int l = 0; l < n; ++l) entry = entry + e[j][k][l] * Xbar_phi[std::size_t(l)];
            H[j][k] = entry;
        }
    // Hermitian matrix whose x^H Q x equals Re sum H_jk x_j conj(x_k)
    HermitianField Q(S.chart(), n);
    for (std::size_t p = 0; p < S.chart()->points(); ++p) {
        auto& M = Q.at(p);
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                M(j, k) = 0.5 * (std::conj(H[j][k](p)) + H[k][j](p));
    }
    return Q;
}

HermitianField q_form(const LineBundleMetric& h,
                      const std::vector<std::vector<std::vector<ScalarField>>>& e) {
    HermitianField out = q_form(*h.structure, h.weight(), e);
    if (h.tau != 1)
        for (std::size_t p = 0; p < h.structure->chart()->points(); ++p)
            out.at(p) *= double(h.tau);
    return out;
}

EigStats eig_stats(const Eigen::MatrixXcd& herm, double tol) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm, Eigen::EigenvaluesOnly);
    EigStats s;
    for (int i = 0; i < es.eigenvalues().size(); ++i) {
        double l = es.eigenvalues()(i);
        if (l > tol) ++s.positive;
        else if (l < -tol) ++s.negative;
        else ++s.zero;
    }
    return s;
}

EigStats eig_stats_restricted(const Eigen::MatrixXcd& herm, const Eigen::MatrixXcd& basis,
                              double tol) {
    if (basis.cols() == 0) return {};
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(basis);
    Eigen::MatrixXcd Qb =
        qr.householderQ() * Eigen::MatrixXcd::Identity(basis.rows(), basis.cols());
    Eigen::MatrixXcd R = Qb.adjoint() * herm * Qb;
    return eig_stats(0.5 * (R + R.adjoint()), tol);
}

ConvexityVerdict check_q_convex(const FIStructure& S, const ScalarField& phi, int q,
                                const std::vector<std::vector<std::vector<ScalarField>>>& e,
                                double tol, const std::vector<std::uint8_t>* region) {
    // q = n+1 is admitted and trivially true (the demanded count drops to 0)
    if (q < 1 || q > S.n() + 1) throw Error("check_q_convex: q out of range");
    auto masks = critical_sets(S, phi);
    auto Q = q_form(S, phi, e);
    auto Xphi = frame_derivatives(S, phi, false);
    const int n = S.n();

    ConvexityVerdict v;
    for (std::size_t p = 0; p < S.chart()->points(); ++p) {
        if (!masks.K[p]) continue;
        if (region && !(*region)[p]) continue;
        v.checked_points.push_back(p);
        Eigen::RowVectorXcd c(n);
        for (int j = 0; j < n; ++j) c(j) = Xphi[std::size_t(j)](p);
        Eigen::MatrixXcd basis;
        if (c.norm() <= 1e-6) {
            basis = Eigen::MatrixXcd::Identity(n, n);
        } else {
            Eigen::JacobiSVD<Eigen::MatrixXcd> svd(c, Eigen::ComputeFullV);
            basis = svd.matrixV().rightCols(n - 1);
        }
        auto stats = eig_stats_restricted(Q.at(p), basis, tol);
        int need = int(basis.cols()) - q + 1;
        if (stats.positive < need) {
            if (v.pass) {
                v.first_failure = p;
                v.required = need;
                v.found = stats.positive;
            }
            v.pass = false;
        }
    }
    return v;
}

ConvexityVerdict check_q_positive(const LineBundleMetric& h, int q,
                                  const std::vector<std::vector<std::vector<ScalarField>>>& e,
                                  double tol) {
    const auto& S = *h.structure;
    if (q < 1 || q > S.n()) throw Error("check_q_positive: q out of range");
    auto masks = critical_sets(S, h.weight());
    auto Q = q_form(h, e);
    ConvexityVerdict v;
    const int need = S.n() - q + 1;
    for (std::size_t p = 0; p < S.chart()->points(); ++p) {
        if (!masks.K[p]) continue;
        v.checked_points.push_back(p);
        auto stats = eig_stats(Q.at(p), tol);
        if (stats.positive < need) {
            if (v.pass) {
                v.first_failure = p;
                v.required = need;
                v.found = stats.positive;
            }
            v.pass = false;
        }
    }
    return v;
}

std::pair<VectorField, ScalarField> leafwise_gradient(const FIStructure& S,
                                                      const ScalarField& phi) {
    require_real(phi, "weight");
    const auto chart = S.chart();
    const int dim = chart->dim(), n = S.n();
    std::vector<ScalarField> grad;
    for (int nu = 0; nu < dim; ++nu) grad.push_back(partial_derivative(phi, nu));

    std::vector<Eigen::VectorXcd> comps(std::size_t(dim),
                                        Eigen::VectorXcd(Eigen::Index(chart->points())));
    Eigen::VectorXcd normf(Eigen::Index(chart->points()));
    Eigen::MatrixXcd A(dim, n);
    Eigen::VectorXcd g(dim);
    for (std::size_t p = 0; p < chart->points(); ++p) {
        for (int nu = 0; nu < dim; ++nu) {
            g(nu) = grad[std::size_t(nu)](p);
            for (int j = 0; j < n; ++j) A(nu, j) = S.X(j).component(nu)(p);
        }
        // orthogonal projection onto the span of the frame columns
        Eigen::HouseholderQR<Eigen::MatrixXcd> qr(A);
        Eigen::MatrixXcd Qb = qr.householderQ() * Eigen::MatrixXcd::Identity(dim, n);
        Eigen::VectorXcd proj = Qb * (Qb.adjoint() * g);
        for (int nu = 0; nu < dim; ++nu) comps[std::size_t(nu)](Eigen::Index(p)) = proj(nu);
        normf(Eigen::Index(p)) = proj.norm();
    }
    std::vector<ScalarField> fields;
    for (int nu = 0; nu < dim; ++nu) fields.emplace_back(chart, std::move(comps[std::size_t(nu)]));
    return {VectorField(chart, std::move(fields)), ScalarField(chart, std::move(normf))};
}

CompensationResult compensate_e(const FIStructure& S, const ScalarField& phi,
                                const std::vector<std::vector<std::vector<ScalarField>>>& e,
                                const std::vector<std::uint8_t>& region, double tol) {
    require_real(phi, "weight");
    const auto chart = S.chart();
    const int dim = chart->dim(), n = S.n();
    if (region.size() != chart->points()) throw Error("compensate_e: region mask size");

    auto Q = q_form(S, phi, e);
    std::vector<ScalarField> grad;
    for (int nu = 0; nu < dim; ++nu) grad.push_back(partial_derivative(phi, nu));

    std::vector<Eigen::VectorXcd> xcomp(std::size_t(dim),
                                        Eigen::VectorXcd::Zero(Eigen::Index(chart->points())));
    std::vector<Eigen::VectorXcd> ecoef(std::size_t(n),
                                        Eigen::VectorXcd::Zero(Eigen::Index(chart->points())));
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(Eigen::Index(chart->points()));
    Eigen::VectorXcd xphi = Eigen::VectorXcd::Zero(Eigen::Index(chart->points()));

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es;
    for (std::size_t p = 0; p < chart->points(); ++p) {
        if (!region[p]) continue;
        Eigen::MatrixXcd B = intersection_basis(S, p);
        if (B.cols() == 0) throw NoRealDirection(p);
        Eigen::HouseholderQR<Eigen::MatrixXcd> qr(B);
        Eigen::MatrixXcd Qb = qr.householderQ() * Eigen::MatrixXcd::Identity(dim, B.cols());
        Eigen::VectorXcd g(dim);
        for (int nu = 0; nu < dim; ++nu) g(nu) = grad[std::size_t(nu)](p);
        Eigen::VectorXcd X = Qb * (Qb.adjoint() * g);
        double xphi_p = std::real(g.dot(X)); // = |proj|^2, real for real phi
        if (xphi_p <= tol) throw NoRealDirection(p);

        Eigen::VectorXcd coords = S.coframe().inverse_matrix(p) * X;
        es.compute(Q.at(p), Eigen::EigenvaluesOnly);
        double lmin = es.eigenvalues()(0);
        double psi_p = std::max(0.0, (1.0 - lmin) / xphi_p);

        for (int nu = 0; nu < dim; ++nu) xcomp[std::size_t(nu)](Eigen::Index(p)) = X(nu);
        for (int l = 0; l < n; ++l) ecoef[std::size_t(l)](Eigen::Index(p)) = coords(l);
        psi(Eigen::Index(p)) = psi_p;
        xphi(Eigen::Index(p)) = xphi_p;
    }

    CompensationResult out;
    out.e = e;
    std::vector<ScalarField> el;
    for (int l = 0; l < n; ++l) el.emplace_back(chart, ecoef[std::size_t(l)]);
    ScalarField psif(chart, std::move(psi));
    for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l)
            out.e[j][j][l] = out.e[j][j][l] + psif * el[std::size_t(l)].conjugate();
    out.psi = psif;
    std::vector<ScalarField> xfields;
    for (int nu = 0; nu < dim; ++nu)
        xfields.emplace_back(chart, std::move(xcomp[std::size_t(nu)]));
    out.X = VectorField(chart, std::move(xfields));
    out.x_of_phi = ScalarField(chart, std::move(xphi));
    return out;
}

double eigenfloor_theta(double t, double delta) {
    if (t >= 1.0) return t;
    double c = 4.0 * (1.0 + delta) / (27.0 * delta);
    double u = 1.0 - t;
    return t + c * u * u * u;
}

HermitianField eigenfloor_metric(const HermitianField& A, const ScalarField& eta, double delta) {
    if (!(delta > 0.0)) throw Error("eigenfloor: delta must be positive");
    require_real(eta, "eigenfloor scale");
    HermitianField out(A.chart(), A.n());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es;
    for (std::size_t p = 0; p < A.chart()->points(); ++p) {
        double h = std::real(eta(p));
        if (!(h > 0.0)) throw Error("eigenfloor: eta must be positive");
        es.compute(A.at(p));
        Eigen::VectorXd lam = es.eigenvalues();
        for (int i = 0; i < lam.size(); ++i) lam(i) = h * eigenfloor_theta(lam(i) / h, delta);
        out.at(p) = es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().adjoint();
    }
    return out;
}

// --- chi ----------------------------------------------------------------------

double ChiFunction::deriv(double t) const {
    if (t_.empty()) return 1.0;
    if (t <= t_.front()) return chip_.front();
    for (std::size_t i = 0; i + 1 < t_.size(); ++i)
        if (t <= t_[i + 1]) return chip_[i] * std::exp(slope_[i] * (t - t_[i]));
    return chip_.back();
}

double ChiFunction::second(double t) const {
    if (t_.empty()) return 0.0;
    if (t <= t_.front()) return 0.0;
    for (std::size_t i = 0; i + 1 < t_.size(); ++i)
        if (t <= t_[i + 1]) return slope_[i] * chip_[i] * std::exp(slope_[i] * (t - t_[i]));
    return 0.0;
}

double ChiFunction::value(double t) const {
    if (t_.empty()) return t;
    if (t <= t_.front()) return chi_.front() + chip_.front() * (t - t_.front());
    for (std::size_t i = 0; i + 1 < t_.size(); ++i) {
        if (t <= t_[i + 1]) {
            double s = slope_[i], dt = t - t_[i];
            if (std::abs(s) < 1e-14) return chi_[i] + chip_[i] * dt;
            return chi_[i] + chip_[i] * (std::exp(s * dt) - 1.0) / s;
        }
    }
    return chi_.back() + chip_.back() * (t - t_.back());
}

ChiReport construct_chi(const FIStructure& S, const ScalarField& phi,
                        const EstimateFields& fields, const std::vector<double>& t_grid) {
    require_real(phi, "exhaustion weight");
    require_real(fields.Psi, "Psi");
    if (t_grid.size() < 2) throw Error("construct_chi: need at least two sample points");
    const auto chart = S.chart();
    const std::size_t P = chart->points();
    auto xphi = leafwise_gradient(S, phi).second;

    auto phiv = [&](std::size_t p) { return std::real(phi(p)); };
    auto psiv = [&](std::size_t p) { return std::real(fields.Psi(p)); };

    auto sup_over = [&](double t, auto&& f, bool need_psi, bool need_copsi) {
        double s = 0.0;
        for (std::size_t p = 0; p < P; ++p) {
            if (phiv(p) >= t + 1.0) continue;
            double w = psiv(p);
            if (need_psi && std::abs(w) < 1e-12) continue;
            if (need_copsi && std::abs(1.0 - w) < 1e-12) continue;
            s = std::max(s, f(p));
        }
        return s;
    };

    auto mu_t = [&](double t) {
        return sup_over(t, [&](std::size_t p) {
            double num = (1.0 - std::real(fields.C_eps(p))) * psiv(p);
            double den = std::real(fields.mu(p));
            if (den <= 0.0) {
                if (num <= 0.0) return 0.0;
                throw Error("construct_chi: unbounded sup (mu) at t = " + std::to_string(t));
            }
            return num / den;
        }, true, false);
    };
    auto R_t = [&](double t) {
        return sup_over(t, [&](std::size_t p) {
            double x2 = std::pow(std::real(xphi(p)), 2);
            double num = 1.0 - std::real(fields.R(p)) / psiv(p);
            if (x2 <= 1e-14) {
                if (num <= 0.0) return 0.0;
                throw Error("construct_chi: unbounded sup (R) at t = " + std::to_string(t));
            }
            return num / x2;
        }, true, false);
    };
    auto C_t = [&](double t) {
        return sup_over(t, [&](std::size_t p) { return 1.0 - std::real(fields.C_eps(p)); },
                        false, false);
    };
    auto lam_t = [&](double t) {
        return sup_over(t, [&](std::size_t p) {
            double num = (1.0 - std::real(fields.C_eps(p))) * (1.0 - psiv(p));
            double den = std::real(fields.lambda(p));
            if (den <= 0.0) {
                if (num <= 0.0) return 0.0;
                throw Error("construct_chi: unbounded sup (lambda) at t = " + std::to_string(t));
            }
            return num / den;
        }, false, true);
    };

    ChiReport rep;
    auto& chi = rep.chi;
    chi.t_ = t_grid;
    const std::size_t K = t_grid.size();
    std::vector<double> floorv(K), rdem(K);
    for (std::size_t i = 0; i < K; ++i) {
        double t = t_grid[i];
        floorv[i] = std::max({mu_t(t), C_t(t), lam_t(t), 1.0});
        rdem[i] = std::max(R_t(t), 0.0);
    }
    chi.chip_.assign(K, 0.0);
    chi.chi_.assign(K, 0.0);
    chi.slope_.assign(K - 1, 0.0);
    chi.chip_[0] = floorv[0];
    chi.chi_[0] = t_grid[0];
    for (std::size_t i = 0; i + 1 < K; ++i) {
        double dt = t_grid[i + 1] - t_grid[i];
        if (!(dt > 0.0)) throw Error("construct_chi: t grid must be increasing");
        double s = std::max(rdem[i], rdem[i + 1]);
        double next = std::max(chi.chip_[i] * std::exp(s * dt), floorv[i + 1]);
        chi.chip_[i + 1] = next;
        chi.slope_[i] = std::log(next / chi.chip_[i]) / dt;
        double seff = chi.slope_[i];
        chi.chi_[i + 1] = (std::abs(seff) < 1e-14)
                              ? chi.chi_[i] + chi.chip_[i] * dt
                              : chi.chi_[i] + chi.chip_[i] * (std::exp(seff * dt) - 1.0) / seff;
    }

    // the three pointwise inequalities over the sampled range
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t p = 0; p < P; ++p) {
        double t = phiv(p);
        if (t > t_grid.back()) continue;
        double cp = chi.deriv(t), cpp = chi.second(t);
        double Psi = psiv(p), Ce = std::real(fields.C_eps(p));
        double s1 = cp * std::real(fields.mu(p)) + Ce * Psi - Psi;
        double s2 = cp * std::real(fields.R(p)) + cpp * Psi * std::pow(std::real(xphi(p)), 2) +
                    Ce * Psi - Psi;
        double s3 = cp * std::real(fields.lambda(p)) + Ce * (1.0 - Psi) - (1.0 - Psi);
        worst = std::min({worst, s1, s2, s3});
    }
    rep.worst_slack = worst;
    rep.pass = worst >= -1e-8;
    return rep;
}

} // namespace fiskit
