#include "fiskit/field.hpp"

#include <cmath>
#include <functional>

namespace fiskit {

ScalarField::ScalarField(ChartPtr chart, Eigen::VectorXcd samples)
    : chart_(std::move(chart)), data_(std::move(samples)) {
    if (std::size_t(data_.size()) != chart_->points())
        throw Error("sample vector does not match the chart grid");
    if (!finite()) throw Error("field contains non-finite samples");
}

ScalarField ScalarField::constant(ChartPtr chart, cplx value) {
    auto n = Eigen::Index(chart->points());
    return {std::move(chart), Eigen::VectorXcd::Constant(n, value)};
}

ScalarField ScalarField::coordinate(ChartPtr chart, int axis) {
    Eigen::VectorXcd v(Eigen::Index(chart->points()));
    for (std::size_t p = 0; p < chart->points(); ++p)
        v(Eigen::Index(p)) = chart->point_coords(p)[axis];
    return {std::move(chart), std::move(v)};
}

ScalarField ScalarField::sample(ChartPtr chart,
                                const std::function<cplx(const std::vector<double>&)>& f) {
    Eigen::VectorXcd v(Eigen::Index(chart->points()));
    for (std::size_t p = 0; p < chart->points(); ++p)
        v(Eigen::Index(p)) = f(chart->point_coords(p));
    return {std::move(chart), std::move(v)};
}

bool ScalarField::finite() const {
    for (Eigen::Index i = 0; i < data_.size(); ++i)
        if (!std::isfinite(data_(i).real()) || !std::isfinite(data_(i).imag())) return false;
    return true;
}

ScalarField ScalarField::operator+(const ScalarField& o) const {
    require_same_chart(chart_, o.chart_, "field addition");
    return {chart_, data_ + o.data_};
}
ScalarField ScalarField::operator-(const ScalarField& o) const {
    require_same_chart(chart_, o.chart_, "field subtraction");
    return {chart_, data_ - o.data_};
}
ScalarField ScalarField::operator*(const ScalarField& o) const {
    require_same_chart(chart_, o.chart_, "field product");
    return {chart_, data_.cwiseProduct(o.data_)};
}

VectorField::VectorField(ChartPtr chart, std::vector<ScalarField> components)
    : chart_(std::move(chart)), comps_(std::move(components)) {
    if (int(comps_.size()) != chart_->dim())
        throw Error("vector field needs one component per coordinate");
    for (const auto& c : comps_) require_same_chart(chart_, c.chart(), "vector component");
}

VectorField VectorField::coordinate_direction(ChartPtr chart, int axis, cplx scale) {
    std::vector<ScalarField> comps;
    for (int a = 0; a < chart->dim(); ++a)
        comps.push_back(ScalarField::constant(chart, a == axis ? scale : cplx(0.0)));
    return {std::move(chart), std::move(comps)};
}

VectorField VectorField::conjugate() const {
    std::vector<ScalarField> comps;
    for (const auto& c : comps_) comps.push_back(c.conjugate());
    return {chart_, std::move(comps)};
}
VectorField VectorField::operator+(const VectorField& o) const {
    std::vector<ScalarField> comps;
    for (int a = 0; a < dim(); ++a) comps.push_back(comps_[a] + o.comps_[a]);
    return {chart_, std::move(comps)};
}
VectorField VectorField::operator-(const VectorField& o) const {
    std::vector<ScalarField> comps;
    for (int a = 0; a < dim(); ++a) comps.push_back(comps_[a] - o.comps_[a]);
    return {chart_, std::move(comps)};
}
VectorField VectorField::operator*(cplx s) const {
    std::vector<ScalarField> comps;
    for (const auto& c : comps_) comps.push_back(c * s);
    return {chart_, std::move(comps)};
}

ScalarField partial_derivative(const ScalarField& f, int axis) {
    const auto& chart = f.chart();
    if (axis < 0 || axis >= chart->dim()) throw Error("derivative axis out of range");
    const auto& D = chart->deriv_matrix(axis);
    const int N = chart->axis(axis).resolution;
    const std::size_t stride = chart->stride(axis);
    const std::size_t block = stride * std::size_t(N);

    Eigen::VectorXcd out(f.data().size());
    Eigen::VectorXcd line(N), dline(N);
    for (std::size_t base = 0; base < chart->points(); base += block) {
        for (std::size_t off = 0; off < stride; ++off) {
            for (int i = 0; i < N; ++i)
                line(i) = f.data()(Eigen::Index(base + off + stride * std::size_t(i)));
            dline = D * line;
            for (int i = 0; i < N; ++i)
                out(Eigen::Index(base + off + stride * std::size_t(i))) = dline(i);
        }
    }
    return {chart, std::move(out)};
}

ScalarField apply_vector(const VectorField& X, const ScalarField& f) {
    require_same_chart(X.chart(), f.chart(), "apply_vector");
    ScalarField acc = ScalarField::constant(f.chart(), 0.0);
    for (int a = 0; a < X.dim(); ++a)
        acc = acc + X.component(a) * partial_derivative(f, a);
    return acc;
}

VectorField lie_bracket(const VectorField& X, const VectorField& Y) {
    require_same_chart(X.chart(), Y.chart(), "lie_bracket");
    std::vector<ScalarField> comps;
    for (int a = 0; a < X.dim(); ++a)
        comps.push_back(apply_vector(X, Y.component(a)) - apply_vector(Y, X.component(a)));
    return {X.chart(), std::move(comps)};
}

cplx integrate(const ScalarField& f, const ScalarField* weight) {
    Eigen::VectorXcd vals = f.data();
    if (weight) {
        require_same_chart(f.chart(), weight->chart(), "integrate weight");
        require_real(*weight, "integration weight");
        vals = vals.cwiseProduct((-weight->data().real()).array().exp().matrix().cast<cplx>());
    }
    return vals.sum() * f.chart()->cell_volume();
}

ScalarField bump(ChartPtr chart, const std::vector<double>& center, double radius) {
    if (int(center.size()) != chart->dim()) throw Error("bump center dimension mismatch");
    double min_period = chart->axis(0).period;
    for (int a = 1; a < chart->dim(); ++a)
        min_period = std::min(min_period, chart->axis(a).period);
    if (!(radius > 0.0) || radius >= 0.5 * min_period)
        throw Error("bump radius must be positive and below half the smallest period");

    Eigen::VectorXcd v(Eigen::Index(chart->points()));
    for (std::size_t p = 0; p < chart->points(); ++p) {
        auto x = chart->point_coords(p);
        double r2 = 0.0;
        for (int a = 0; a < chart->dim(); ++a) {
            double d = std::fabs(x[a] - center[a]);
            double L = chart->axis(a).period;
            d = std::fmod(d, L);
            d = std::min(d, L - d);
            r2 += d * d;
        }
        double s = r2 / (radius * radius);
        v(Eigen::Index(p)) = (s < 1.0) ? std::exp(1.0 - 1.0 / (1.0 - s)) : 0.0;
    }
    return {std::move(chart), std::move(v)};
}

void require_real(const ScalarField& f, const char* what, double tol) {
    if (f.max_imag() > tol)
        throw Error(std::string(what) + " must be real-valued (|Im| = " +
                    std::to_string(f.max_imag()) + ")");
}

void require_same_chart(const ChartPtr& a, const ChartPtr& b, const char* what) {
    if (a.get() != b.get()) throw ChartMismatch(what);
}

} // namespace fiskit
