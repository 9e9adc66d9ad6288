#include "fiskit/form.hpp"

#include <Eigen/SVD>
#include <algorithm>

namespace fiskit {

namespace mi {

long long choose(int n, int k) {
    if (k < 0 || k > n) return 0;
    long long r = 1;
    for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
    return r;
}

std::vector<Index> all(int n, int k) {
    std::vector<Index> out;
    if (k < 0 || k > n) return out;
    Index idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    for (;;) {
        out.push_back(idx);
        int i = k - 1;
        while (i >= 0 && idx[i] == n - k + i) --i;
        if (i < 0) break;
        ++idx[i];
        for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
    return out;
}

long long rank(const Index& idx, int n) {
    const int k = int(idx.size());
    long long r = 0;
    int prev = -1;
    for (int i = 0; i < k; ++i) {
        for (int v = prev + 1; v < idx[i]; ++v) r += choose(n - 1 - v, k - 1 - i);
        prev = idx[i];
    }
    return r;
}

Index unrank(long long r, int n, int k) {
    Index idx(k);
    int v = 0;
    for (int i = 0; i < k; ++i) {
        for (;; ++v) {
            long long c = choose(n - 1 - v, k - 1 - i);
            if (r < c) break;
            r -= c;
        }
        idx[i] = v++;
    }
    return idx;
}

std::pair<int, Index> insert(int j, const Index& I) {
    Index out;
    out.reserve(I.size() + 1);
    int sign = 1;
    bool placed = false;
    for (int v : I) {
        if (v == j) return {0, {}};
        if (!placed && v > j) {
            out.push_back(j);
            placed = true;
        }
        if (!placed) sign = -sign;
        out.push_back(v);
    }
    if (!placed) out.push_back(j);
    return {sign, out};
}

std::pair<int, Index> merge(const Index& I, const Index& J) {
    // Sign of the shuffle sorting (I, J): both inputs are increasing, so the
    // inversion count is sum over j in J of #{v in I : v > j}.
    long long inversions = 0;
    Index out;
    out.reserve(I.size() + J.size());
    for (int j : J) {
        std::size_t gt = 0;
        for (std::size_t i = I.size(); i-- > 0;) {
            if (I[i] > j) ++gt;
            else if (I[i] == j) return {0, {}};
            else break;
        }
        inversions += static_cast<long long>(gt);
    }
    std::merge(I.begin(), I.end(), J.begin(), J.end(), std::back_inserter(out));
    return {(inversions % 2 == 0) ? 1 : -1, out};
}

std::pair<int, Index> remove(int j, const Index& I) {
    Index out;
    int sign = 1;
    bool found = false;
    for (int v : I) {
        if (v == j) {
            found = true;
            continue;
        }
        if (!found) sign = -sign;
        out.push_back(v);
    }
    if (!found) return {0, {}};
    return {sign, out};
}

bool contains(const Index& I, int j) {
    return std::binary_search(I.begin(), I.end(), j);
}

} // namespace mi

Form::Form(ChartPtr chart, int degree) : chart_(std::move(chart)), degree_(degree) {
    if (degree < 0 || degree > chart_->dim()) throw Error("form degree out of range");
    long long n = mi::choose(chart_->dim(), degree);
    coeffs_.assign(std::size_t(n), ScalarField::constant(chart_, 0.0));
}

Form::Form(ChartPtr chart, int degree, const CoFrame* frame) : Form(std::move(chart), degree) {
    basis_ = FormBasis::Frame;
    frame_ = frame;
}

Form Form::scalar(const ScalarField& f) {
    Form out(f.chart(), 0);
    out.coeffs_[0] = f;
    return out;
}

Form Form::coordinate_differential(ChartPtr chart, int axis) {
    Form out(chart, 1);
    out.coeff(mi::Index{axis}) = ScalarField::constant(chart, 1.0);
    return out;
}

double Form::max_abs() const {
    double m = 0.0;
    for (const auto& c : coeffs_) m = std::max(m, c.max_abs());
    return m;
}

static void require_compatible(const Form& a, const Form& b, const char* what) {
    require_same_chart(a.chart(), b.chart(), what);
    if (a.basis() != b.basis() || a.frame() != b.frame())
        throw Error(std::string(what) + ": mixed form bases");
}

Form Form::operator+(const Form& o) const {
    require_compatible(*this, o, "form addition");
    if (degree_ != o.degree_) throw Error("form addition: degree mismatch");
    Form out = *this;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) out.coeffs_[i] = coeffs_[i] + o.coeffs_[i];
    return out;
}

Form Form::operator-(const Form& o) const { return *this + o * cplx(-1.0); }

Form Form::operator*(cplx s) const {
    Form out = *this;
    for (auto& c : out.coeffs_) c = c * s;
    return out;
}

Form Form::operator*(const ScalarField& f) const {
    Form out = *this;
    for (auto& c : out.coeffs_) c = c * f;
    return out;
}

Form wedge(const Form& a, const Form& b) {
    require_compatible(a, b, "wedge");
    const int dim = a.chart()->dim();
    if (a.degree() + b.degree() > dim) throw Error("wedge: degree overflow");
    Form out = (a.basis() == FormBasis::Frame) ? Form(a.chart(), a.degree() + b.degree(), a.frame())
                                               : Form(a.chart(), a.degree() + b.degree());
    auto Is = mi::all(dim, a.degree());
    auto Js = mi::all(dim, b.degree());
    for (const auto& I : Is) {
        const auto& ca = a.coeff(I);
        if (ca.max_abs() == 0.0) continue;
        for (const auto& J : Js) {
            auto [sign, K] = mi::merge(I, J);
            if (sign == 0) continue;
            const auto& cb = b.coeff(J);
            if (cb.max_abs() == 0.0) continue;
            out.coeff(K) = out.coeff(K) + ca * cb * cplx(double(sign));
        }
    }
    return out;
}

Form exterior_derivative(const Form& a) {
    Form src = (a.basis() == FormBasis::Frame) ? to_coordinate_basis(a) : a;
    const int dim = src.chart()->dim();
    if (src.degree() == dim)
        throw Error("exterior derivative of a top-degree form leaves the chart");
    Form out(src.chart(), src.degree() + 1);
    for (const auto& J : mi::all(dim, src.degree())) {
        const auto& c = src.coeff(J);
        for (int nu = 0; nu < dim; ++nu) {
            auto [sign, K] = mi::insert(nu, J);
            if (sign == 0) continue;
            out.coeff(K) = out.coeff(K) + partial_derivative(c, nu) * cplx(double(sign));
        }
    }
    return out;
}

Form interior_product(const VectorField& X, const Form& a) {
    require_same_chart(X.chart(), a.chart(), "interior product");
    if (a.basis() == FormBasis::Frame)
        throw Error("interior product expects a coordinate-basis form");
    if (a.degree() == 0) throw Error("interior product of a 0-form");
    const int dim = a.chart()->dim();
    Form out(a.chart(), a.degree() - 1);
    for (const auto& J : mi::all(dim, a.degree() - 1)) {
        ScalarField acc = ScalarField::constant(a.chart(), 0.0);
        for (int nu = 0; nu < dim; ++nu) {
            auto [sign, K] = mi::insert(nu, J);
            if (sign == 0) continue;
            acc = acc + X.component(nu) * a.coeff(K) * cplx(double(sign));
        }
        out.coeff(J) = acc;
    }
    return out;
}

CoFrame CoFrame::dual_to(const std::vector<VectorField>& frame, int n_count, double tol) {
    if (frame.empty()) throw Error("dual_coframe: empty frame");
    ChartPtr chart = frame[0].chart();
    const int dim = chart->dim();
    if (int(frame.size()) != dim) throw Error("dual_coframe: frame must have dim fields");
    for (const auto& f : frame) require_same_chart(chart, f.chart(), "dual_coframe");

    CoFrame out;
    out.chart_ = chart;
    out.n_count_ = n_count;
    out.A_.resize(chart->points());
    out.Ainv_.resize(chart->points());
    std::vector<Eigen::VectorXcd> rows(dim, Eigen::VectorXcd(Eigen::Index(chart->points())));

    Eigen::MatrixXcd A(dim, dim);
    for (std::size_t p = 0; p < chart->points(); ++p) {
        for (int nu = 0; nu < dim; ++nu)
            for (int j = 0; j < dim; ++j) A(nu, j) = frame[j].component(nu)(p);
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A);
        double smin = svd.singularValues()(dim - 1);
        if (smin < tol) throw FrameDegenerate(p, smin);
        out.A_[p] = A;
        out.Ainv_[p] = A.inverse();
    }

    for (int j = 0; j < dim; ++j) {
        Form fj(chart, 1);
        for (int nu = 0; nu < dim; ++nu) {
            Eigen::VectorXcd v(Eigen::Index(chart->points()));
            for (std::size_t p = 0; p < chart->points(); ++p) v(Eigen::Index(p)) = out.Ainv_[p](j, nu);
            fj.coeff(mi::Index{nu}) = ScalarField(chart, std::move(v));
        }
        out.forms_.push_back(std::move(fj));
    }
    return out;
}

double CoFrame::pairing_residual(const std::vector<VectorField>& frame) const {
    double worst = 0.0;
    const int dim = chart_->dim();
    for (int j = 0; j < dim; ++j) {
        for (int k = 0; k < dim; ++k) {
            ScalarField pair = ScalarField::constant(chart_, 0.0);
            for (int nu = 0; nu < dim; ++nu)
                pair = pair + forms_[j].coeff(mi::Index{nu}) * frame[k].component(nu);
            double target = (j == k) ? 1.0 : 0.0;
            worst = std::max(worst, (pair - ScalarField::constant(chart_, target)).max_abs());
        }
    }
    return worst;
}

// Degree-k basis change: with A the pointwise frame component matrix,
// frame coefficients b_J = sum_I a_I det(A[I, J]) and coordinate
// coefficients a_I = sum_J b_J det(Ainv[J, I]).
static Form compound_transform(const Form& a, const CoFrame& cf, bool to_frame) {
    const int dim = a.chart()->dim();
    const int k = a.degree();
    auto idxs = mi::all(dim, k);
    Form out = to_frame ? Form(a.chart(), k, &cf) : Form(a.chart(), k);

    if (k == 0) {
        out.coeff(0LL) = a.coeff(0LL);
        return out;
    }
    const auto npts = a.chart()->points();
    std::vector<Eigen::VectorXcd> acc(idxs.size(),
                                      Eigen::VectorXcd::Zero(Eigen::Index(npts)));
    Eigen::MatrixXcd sub(k, k);
    for (std::size_t p = 0; p < npts; ++p) {
        const Eigen::MatrixXcd& M = to_frame ? cf.frame_matrix(p) : cf.inverse_matrix(p);
        for (std::size_t jo = 0; jo < idxs.size(); ++jo) {
            cplx value = 0.0;
            for (std::size_t ji = 0; ji < idxs.size(); ++ji) {
                cplx c = a.coeff(static_cast<long long>(ji))(p);
                if (c == cplx(0.0)) continue;
                // det(M[rows = source index, cols = target index]); the
                // direction is encoded entirely in the choice of M.
                const auto& rows = idxs[ji];
                const auto& cols = idxs[jo];
                for (int r = 0; r < k; ++r)
                    for (int cix = 0; cix < k; ++cix) sub(r, cix) = M(rows[r], cols[cix]);
                value += c * sub.determinant();
            }
            acc[jo](Eigen::Index(p)) = value;
        }
    }
    for (std::size_t jo = 0; jo < idxs.size(); ++jo)
        out.coeff(static_cast<long long>(jo)) = ScalarField(a.chart(), std::move(acc[jo]));
    return out;
}

Form change_basis(const Form& a, const CoFrame& coframe) {
    require_same_chart(a.chart(), coframe.chart(), "change_basis");
    if (a.basis() == FormBasis::Frame) {
        if (a.frame() != &coframe) throw Error("change_basis: form belongs to another coframe");
        return a;
    }
    return compound_transform(a, coframe, true);
}

Form to_coordinate_basis(const Form& a) {
    if (a.basis() == FormBasis::Coordinate) return a;
    return compound_transform(a, *a.frame(), false);
}

std::pair<int, int> pointwise_rank(const std::vector<VectorField>& vectors, double tol) {
    if (vectors.empty()) throw Error("pointwise_rank: empty list");
    ChartPtr chart = vectors[0].chart();
    for (const auto& v : vectors) require_same_chart(chart, v.chart(), "pointwise_rank");
    const int dim = chart->dim();
    const int k = int(vectors.size());
    Eigen::MatrixXcd M(dim, k);
    int rmin = std::min(dim, k), rmax = 0;
    for (std::size_t p = 0; p < chart->points(); ++p) {
        for (int nu = 0; nu < dim; ++nu)
            for (int j = 0; j < k; ++j) M(nu, j) = vectors[j].component(nu)(p);
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M);
        int r = 0;
        for (int i = 0; i < svd.singularValues().size(); ++i)
            if (svd.singularValues()(i) > tol) ++r;
        rmin = std::min(rmin, r);
        rmax = std::max(rmax, r);
    }
    return {rmin, rmax};
}

} // namespace fiskit
