#include "fiskit/logforms.hpp"

#include <numeric>

namespace fiskit {

namespace {

long long checked_ll(__int128 v, const char* what) {
    if (v > (__int128)((1ll << 62)) || v < -(__int128)((1ll << 62)))
        throw Error(std::string("rational overflow in ") + what);
    return (long long)v;
}

} // namespace

Rational::Rational(long long n, long long d) {
    if (d == 0) throw Error("rational with zero denominator");
    if (d < 0) {
        n = -n;
        d = -d;
    }
    long long g = std::gcd(n < 0 ? -n : n, d);
    if (g > 1) {
        n /= g;
        d /= g;
    }
    num = n;
    den = d;
}

Rational Rational::operator+(const Rational& o) const {
    __int128 n = (__int128)num * o.den + (__int128)o.num * den;
    __int128 d = (__int128)den * o.den;
    __int128 g = 1;
    {
        __int128 an = n < 0 ? -n : n;
        __int128 ad = d;
        while (ad != 0) {
            __int128 r = an % ad;
            an = ad;
            ad = r;
        }
        g = an == 0 ? 1 : an;
    }
    n /= g;
    d /= g;
    return Rational(checked_ll(n, "+"), checked_ll(d, "+"));
}

Rational Rational::operator-(const Rational& o) const { return *this + (-o); }

Rational Rational::operator*(const Rational& o) const {
    long long g1 = std::gcd(num < 0 ? -num : num, o.den);
    long long g2 = std::gcd(o.num < 0 ? -o.num : o.num, den);
    __int128 n = (__int128)(num / g1) * (o.num / g2);
    __int128 d = (__int128)(den / g2) * (o.den / g1);
    return Rational(checked_ll(n, "*"), checked_ll(d, "*"));
}

Rational Rational::operator/(const Rational& o) const {
    if (o.num == 0) throw Error("rational division by zero");
    return *this * Rational(o.den, o.num);
}

bool Monomial::operator<(const Monomial& o) const {
    if (z != o.z) return z < o.z;
    if (zbar != o.zbar) return zbar < o.zbar;
    return t < o.t;
}

std::string Monomial::str() const {
    std::string s;
    auto app = [&](const char* base, const std::vector<int>& e) {
        for (std::size_t i = 0; i < e.size(); ++i)
            if (e[i] != 0)
                s += std::string(base) + std::to_string(i + 1) + "^" + std::to_string(e[i]) + " ";
    };
    app("z", z);
    app("zbar", zbar);
    app("t", t);
    if (s.empty()) s = "1";
    return s;
}

Poly Poly::constant(int m, int nt, CRat c) {
    Poly p(m, nt);
    p.add_term(Monomial{std::vector<int>(m, 0), std::vector<int>(m, 0), std::vector<int>(nt, 0)},
               c);
    return p;
}

Poly Poly::variable_z(int m, int nt, int rho, int power) {
    Poly p(m, nt);
    Monomial mo{std::vector<int>(m, 0), std::vector<int>(m, 0), std::vector<int>(nt, 0)};
    mo.z[rho] = power;
    p.add_term(mo, CRat(Rational(1)));
    return p;
}

Poly Poly::variable_zbar(int m, int nt, int rho) {
    Poly p(m, nt);
    Monomial mo{std::vector<int>(m, 0), std::vector<int>(m, 0), std::vector<int>(nt, 0)};
    mo.zbar[rho] = 1;
    p.add_term(mo, CRat(Rational(1)));
    return p;
}

Poly Poly::variable_t(int m, int nt, int tau) {
    Poly p(m, nt);
    Monomial mo{std::vector<int>(m, 0), std::vector<int>(m, 0), std::vector<int>(nt, 0)};
    mo.t[tau] = 1;
    p.add_term(mo, CRat(Rational(1)));
    return p;
}

void Poly::add_term(Monomial mono, CRat c) {
    if (c.is_zero()) return;
    auto it = terms_.find(mono);
    if (it == terms_.end()) {
        terms_.emplace(std::move(mono), c);
    } else {
        it->second = it->second + c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

Poly Poly::operator+(const Poly& o) const {
    Poly out = *this;
    for (const auto& [mo, c] : o.terms_) out.add_term(mo, c);
    return out;
}

Poly Poly::operator-(const Poly& o) const {
    Poly out = *this;
    for (const auto& [mo, c] : o.terms_) out.add_term(mo, -c);
    return out;
}

Poly Poly::operator*(const Poly& o) const {
    Poly out(m_, nt_);
    for (const auto& [ma, ca] : terms_) {
        for (const auto& [mb, cb] : o.terms_) {
            Monomial mo = ma;
            for (int i = 0; i < m_; ++i) {
                mo.z[i] += mb.z[i];
                mo.zbar[i] += mb.zbar[i];
            }
            for (int i = 0; i < nt_; ++i) mo.t[i] += mb.t[i];
            out.add_term(std::move(mo), ca * cb);
        }
    }
    return out;
}

Poly Poly::operator*(const CRat& c) const {
    Poly out(m_, nt_);
    for (const auto& [mo, ca] : terms_) out.add_term(mo, ca * c);
    return out;
}

bool Poly::is_regular() const {
    for (const auto& [mo, c] : terms_)
        for (int e : mo.z)
            if (e < 0) return false;
    return true;
}

bool Poly::is_z_only() const {
    for (const auto& [mo, c] : terms_) {
        for (int e : mo.zbar)
            if (e != 0) return false;
        for (int e : mo.t)
            if (e != 0) return false;
    }
    return true;
}

bool Poly::depends_on_z(int rho) const {
    for (const auto& [mo, c] : terms_)
        if (mo.z[rho] != 0) return true;
    return false;
}

Poly Poly::dz(int rho) const {
    Poly out(m_, nt_);
    for (const auto& [mo, c] : terms_) {
        if (mo.z[rho] == 0) continue;
        Monomial d = mo;
        d.z[rho] -= 1;
        out.add_term(std::move(d), c * CRat(Rational(mo.z[rho])));
    }
    return out;
}

Poly Poly::dzbar(int rho) const {
    Poly out(m_, nt_);
    for (const auto& [mo, c] : terms_) {
        if (mo.zbar[rho] == 0) continue;
        Monomial d = mo;
        d.zbar[rho] -= 1;
        out.add_term(std::move(d), c * CRat(Rational(mo.zbar[rho])));
    }
    return out;
}

Poly Poly::dt(int tau) const {
    Poly out(m_, nt_);
    for (const auto& [mo, c] : terms_) {
        if (mo.t[tau] == 0) continue;
        Monomial d = mo;
        d.t[tau] -= 1;
        out.add_term(std::move(d), c * CRat(Rational(mo.t[tau])));
    }
    return out;
}

Poly Poly::shift_z(int a, int amount) const {
    Poly out(m_, nt_);
    for (const auto& [mo, c] : terms_) {
        Monomial d = mo;
        for (int i = 0; i < a; ++i) d.z[i] += amount;
        out.add_term(std::move(d), c);
    }
    return out;
}

std::optional<Poly> Poly::divide_coords(int a, std::string* witness) const {
    for (const auto& [mo, c] : terms_) {
        for (int i = 0; i < a; ++i) {
            if (mo.z[i] < 1) {
                if (witness) *witness = mo.str();
                return std::nullopt;
            }
        }
    }
    return shift_z(a, -1);
}

std::optional<Poly> Poly::divide_z(int rho, std::string* witness) const {
    Poly out(m_, nt_);
    for (const auto& [mo, c] : terms_) {
        if (mo.z[rho] < 1) {
            if (witness) *witness = mo.str();
            return std::nullopt;
        }
        Monomial d = mo;
        d.z[rho] -= 1;
        out.add_term(std::move(d), c);
    }
    return out;
}

Poly Poly::at_z_zero(int rho) const {
    Poly out(m_, nt_);
    for (const auto& [mo, c] : terms_) {
        if (mo.z[rho] < 0) throw Error("evaluation at a pole");
        if (mo.z[rho] > 0) continue;
        out.add_term(mo, c);
    }
    return out;
}

Poly Poly::drop_z(int rho) const {
    Poly out(m_ - 1, nt_);
    for (const auto& [mo, c] : terms_) {
        if (mo.z[rho] != 0 || mo.zbar[rho] != 0)
            throw Error("drop_z: polynomial still depends on the variable");
        Monomial d;
        d.t = mo.t;
        for (int i = 0; i < m_; ++i) {
            if (i == rho) continue;
            d.z.push_back(mo.z[i]);
            d.zbar.push_back(mo.zbar[i]);
        }
        out.add_term(std::move(d), c);
    }
    return out;
}

Poly Poly::lift_z(int at) const {
    Poly out(m_ + 1, nt_);
    for (const auto& [mo, c] : terms_) {
        Monomial d;
        d.t = mo.t;
        d.z = mo.z;
        d.zbar = mo.zbar;
        d.z.insert(d.z.begin() + at, 0);
        d.zbar.insert(d.zbar.begin() + at, 0);
        out.add_term(std::move(d), c);
    }
    return out;
}

// --- forms ---------------------------------------------------------------------

PolyForm PolyForm::zero(int m, int nt, int degree) {
    PolyForm f;
    f.m = m;
    f.nt = nt;
    f.degree = degree;
    f.coeffs.assign(std::size_t(mi::choose(m, degree)), Poly(m, nt));
    return f;
}

Poly& PolyForm::coeff(const mi::Index& P) { return coeffs.at(std::size_t(mi::rank(P, m))); }
const Poly& PolyForm::coeff(const mi::Index& P) const {
    return coeffs.at(std::size_t(mi::rank(P, m)));
}

bool PolyForm::is_zero() const {
    for (const auto& c : coeffs)
        if (!c.is_zero()) return false;
    return true;
}

PolyForm PolyForm::operator+(const PolyForm& o) const {
    PolyForm out = *this;
    for (std::size_t i = 0; i < coeffs.size(); ++i) out.coeffs[i] = coeffs[i] + o.coeffs[i];
    return out;
}

PolyForm PolyForm::operator-(const PolyForm& o) const {
    PolyForm out = *this;
    for (std::size_t i = 0; i < coeffs.size(); ++i) out.coeffs[i] = coeffs[i] - o.coeffs[i];
    return out;
}

PolyForm wedge(const PolyForm& a, const PolyForm& b) {
    if (a.m != b.m || a.nt != b.nt) throw Error("wedge: variable count mismatch");
    PolyForm out = PolyForm::zero(a.m, a.nt, a.degree + b.degree);
    auto Is = mi::all(a.m, a.degree);
    auto Js = mi::all(b.m, b.degree);
    for (const auto& I : Is) {
        const auto& ca = a.coeff(I);
        if (ca.is_zero()) continue;
        for (const auto& J : Js) {
            auto [sign, K] = mi::merge(I, J);
            if (sign == 0) continue;
            const auto& cb = b.coeff(J);
            if (cb.is_zero()) continue;
            Poly term = ca * cb;
            if (sign < 0) term = -term;
            out.coeff(K) = out.coeff(K) + term;
        }
    }
    return out;
}

PolyForm d(const PolyForm& a) {
    PolyForm out = PolyForm::zero(a.m, a.nt, a.degree + 1);
    for (const auto& J : mi::all(a.m, a.degree)) {
        const auto& c = a.coeff(J);
        if (c.is_zero()) continue;
        if (!c.is_z_only())
            throw Error("exterior derivative of a non-basic polynomial form");
        for (int rho = 0; rho < a.m; ++rho) {
            auto [sign, K] = mi::insert(rho, J);
            if (sign == 0) continue;
            Poly dc = c.dz(rho);
            if (dc.is_zero()) continue;
            if (sign < 0) dc = -dc;
            out.coeff(K) = out.coeff(K) + dc;
        }
    }
    return out;
}

LogPForm LogPForm::zero(int m, int nt, int a, int degree) {
    LogPForm f;
    f.m = m;
    f.nt = nt;
    f.a = a;
    f.degree = degree;
    f.coeffs.assign(std::size_t(mi::choose(m, degree)), Poly(m, nt));
    return f;
}

Poly& LogPForm::coeff(const mi::Index& P) { return coeffs.at(std::size_t(mi::rank(P, m))); }
const Poly& LogPForm::coeff(const mi::Index& P) const {
    return coeffs.at(std::size_t(mi::rank(P, m)));
}

bool LogPForm::is_zero() const {
    for (const auto& c : coeffs)
        if (!c.is_zero()) return false;
    return true;
}

LogPForm LogPForm::operator+(const LogPForm& o) const {
    LogPForm out = *this;
    for (std::size_t i = 0; i < coeffs.size(); ++i) out.coeffs[i] = coeffs[i] + o.coeffs[i];
    return out;
}

LogPForm LogPForm::operator-(const LogPForm& o) const {
    LogPForm out = *this;
    for (std::size_t i = 0; i < coeffs.size(); ++i) out.coeffs[i] = coeffs[i] - o.coeffs[i];
    return out;
}

PolyForm LogPForm::to_laurent() const {
    PolyForm out = PolyForm::zero(m, nt, degree);
    for (const auto& P : mi::all(m, degree)) {
        Poly c = coeff(P);
        if (c.is_zero()) continue;
        for (int rho : P) {
            if (rho < a) {
                Poly shifted(m, nt);
                for (const auto& [mo, cc] : c.terms()) {
                    Monomial d2 = mo;
                    d2.z[rho] -= 1;
                    shifted.add_term(std::move(d2), cc);
                }
                c = shifted;
            }
        }
        out.coeff(P) = out.coeff(P) + c;
    }
    return out;
}

LogPForm d_log(const LogPForm& f) {
    // d(c gen_P) = dc ^ gen_P with dz_rho = z_rho gen_rho for rho < a
    LogPForm out = LogPForm::zero(f.m, f.nt, f.a, f.degree + 1);
    for (const auto& P : mi::all(f.m, f.degree)) {
        const Poly& c = f.coeff(P);
        if (c.is_zero()) continue;
        if (!c.is_z_only()) throw Error("d_log: non-basic coefficient");
        for (int rho = 0; rho < f.m; ++rho) {
            auto [sign, K] = mi::insert(rho, P);
            if (sign == 0) continue;
            Poly dc = c.dz(rho);
            if (dc.is_zero()) continue;
            if (rho < f.a) dc = dc * Poly::variable_z(f.m, f.nt, rho);
            if (sign < 0) dc = -dc;
            out.coeff(K) = out.coeff(K) + dc;
        }
    }
    return out;
}

// --- operations ------------------------------------------------------------------

bool is_basic_pform(const PolyForm& f) {
    for (const auto& c : f.coeffs)
        if (!(c.is_z_only() && c.is_regular())) return false;
    return true;
}

PolyForm poincare_homotopy(const PolyForm& f) {
    if (f.degree < 1) throw Error("homotopy needs degree >= 1");
    if (!is_basic_pform(f)) throw Error("homotopy needs a basic polynomial form");
    if (!d(f).is_zero()) throw NotClosed(1.0);
    const int p = f.degree;
    PolyForm out = PolyForm::zero(f.m, f.nt, p - 1);
    for (const auto& P : mi::all(f.m, f.degree)) {
        const Poly& c = f.coeff(P);
        if (c.is_zero()) continue;
        Poly h(f.m, f.nt);
        for (const auto& [mo, cc] : c.terms()) {
            long long total = 0;
            for (int e : mo.z) total += e;
            h.add_term(mo, cc * CRat(Rational(1, p + total)));
        }
        for (std::size_t i = 0; i < P.size(); ++i) {
            mi::Index Q;
            for (std::size_t t2 = 0; t2 < P.size(); ++t2)
                if (t2 != i) Q.push_back(P[t2]);
            Poly term = h * Poly::variable_z(f.m, f.nt, P[i]);
            if (i % 2 == 1) term = -term;
            out.coeff(Q) = out.coeff(Q) + term;
        }
    }
    return out;
}

Poly divide_by_coords(const Poly& F, int rho) {
    if (!(F.is_z_only() && F.is_regular())) throw Error("division needs a basic function");
    std::string witness;
    auto q = F.divide_coords(rho, &witness);
    if (!q) throw NotDivisible(witness);
    return *q;
}

MembershipResult log_membership(const PolyForm& f, const NCHypersurface& D) {
    MembershipResult res;
    const int a = D.a;
    for (const auto& c : f.coeffs) {
        if (!c.is_z_only()) {
            res.violated = "coefficients must be independent of conjugates and t";
            return res;
        }
        if (!c.shift_z(a, +1).is_regular()) {
            res.violated = "F f is not regular";
            return res;
        }
    }
    PolyForm df = PolyForm::zero(f.m, f.nt, f.degree + 1);
    for (const auto& J : mi::all(f.m, f.degree)) {
        const Poly& c = f.coeff(J);
        for (int rho = 0; rho < f.m; ++rho) {
            auto [sign, K] = mi::insert(rho, J);
            if (sign == 0) continue;
            Poly dc = c.dz(rho);
            if (sign < 0) dc = -dc;
            df.coeff(K) = df.coeff(K) + dc;
        }
    }
    for (const auto& c : df.coeffs) {
        if (!c.shift_z(a, +1).is_regular()) {
            res.violated = "F df is not regular";
            return res;
        }
    }
    LogPForm g = LogPForm::zero(f.m, f.nt, a, f.degree);
    for (const auto& P : mi::all(f.m, f.degree)) {
        Poly c = f.coeff(P);
        for (int rho : P)
            if (rho < a) c = c * Poly::variable_z(f.m, f.nt, rho);
        if (!c.is_regular()) {
            res.violated = "pole not aligned with the generator basis";
            return res;
        }
        g.coeff(P) = c;
    }
    res.member = true;
    res.normalized = std::move(g);
    return res;
}

std::pair<LogPForm, LogPForm> log_decompose(const LogPForm& f, int c) {
    if (c < 0 || c >= f.a) throw Error("log_decompose: coordinate outside the divisor");
    LogPForm fp = LogPForm::zero(f.m, f.nt, f.a, f.degree - 1);
    LogPForm fpp = LogPForm::zero(f.m, f.nt, f.a, f.degree);
    for (const auto& P : mi::all(f.m, f.degree)) {
        const Poly& cf = f.coeff(P);
        if (cf.is_zero()) continue;
        if (!mi::contains(P, c)) {
            fpp.coeff(P) = fpp.coeff(P) + cf;
            continue;
        }
        auto [sign, Q] = mi::remove(c, P);
        Poly A = (sign < 0) ? -cf : cf;
        Poly A0 = A.at_z_zero(c);
        fp.coeff(Q) = fp.coeff(Q) + A0;
        Poly rest = A - A0; // divisible by z_c
        if (!rest.is_zero()) {
            Poly back = (sign < 0) ? -rest : rest;
            fpp.coeff(P) = fpp.coeff(P) + back;
        }
    }
    return {fp, fpp};
}

PolyForm residue(const LogPForm& f) {
    if (f.a != 1) throw Error("residue needs a smooth divisor (a = 1)");
    if (f.degree == 0) return PolyForm::zero(f.m - 1, f.nt, 0);
    PolyForm out = PolyForm::zero(f.m - 1, f.nt, f.degree - 1);
    for (const auto& P : mi::all(f.m, f.degree)) {
        if (!mi::contains(P, 0)) continue;
        auto [sign, Q] = mi::remove(0, P);
        Poly A = f.coeff(P);
        if (A.is_zero()) continue;
        if (sign < 0) A = -A;
        Poly resA = A.at_z_zero(0).drop_z(0);
        mi::Index Qd;
        for (int v : Q) Qd.push_back(v - 1);
        out.coeff(Qd) = out.coeff(Qd) + resA;
    }
    return out;
}

PolyForm twist_sD(const LogPForm& f, const NCHypersurface& D) {
    if (f.degree != f.m) throw Error("twist needs a top-degree form");
    PolyForm lf = f.to_laurent();
    PolyForm out = PolyForm::zero(f.m, f.nt, f.m);
    for (std::size_t i = 0; i < lf.coeffs.size(); ++i) {
        Poly c = lf.coeffs[i].shift_z(D.a, +1);
        if (!c.is_regular()) throw Error("twist: member form expected");
        out.coeffs[i] = c;
    }
    return out;
}

LogPForm untwist_sD(const PolyForm& g, const NCHypersurface& D) {
    if (g.degree != g.m) throw Error("untwist needs a top-degree form");
    PolyForm lf = PolyForm::zero(g.m, g.nt, g.m);
    for (std::size_t i = 0; i < g.coeffs.size(); ++i) lf.coeffs[i] = g.coeffs[i].shift_z(D.a, -1);
    auto res = log_membership(lf, D);
    if (!res.member) throw NotDivisible(res.violated);
    return res.normalized;
}

LogPForm extend_from_D(const PolyForm& target) {
    const int m = target.m + 1;
    LogPForm out = LogPForm::zero(m, target.nt, 1, target.degree + 1);
    for (const auto& Q : mi::all(target.m, target.degree)) {
        const Poly& c = target.coeff(Q);
        if (c.is_zero()) continue;
        mi::Index P{0};
        for (int v : Q) P.push_back(v + 1);
        out.coeff(P) = out.coeff(P) + c.lift_z(0);
    }
    return out;
}

ReduceResult reduce_to_constants(const LogPForm& f) {
    ReduceResult out;
    out.primitive = LogPForm::zero(f.m, f.nt, f.a, std::max(f.degree - 1, 0));
    if (!d_log(f).is_zero()) throw NotClosed(1.0);

    if (f.degree <= 0) {
        if (f.degree == 0 && !f.coeffs.empty()) {
            Poly c = f.coeffs[0];
            for (const auto& [mo, cc] : c.terms()) {
                bool unit = true;
                for (int e : mo.z) unit = unit && e == 0;
                if (!unit) throw Error("closed 0-form is not constant");
                out.constants[{}] = cc;
            }
        }
        return out;
    }

    if (f.a == 0) {
        PolyForm plain = PolyForm::zero(f.m, f.nt, f.degree);
        plain.coeffs = f.coeffs;
        PolyForm g = poincare_homotopy(plain);
        LogPForm prim = LogPForm::zero(f.m, f.nt, f.a, f.degree - 1);
        prim.coeffs = g.coeffs;
        out.primitive = prim;
        return out;
    }

    const int c = f.a - 1;
    auto [fp, fpp_same] = log_decompose(f, c);
    // view both pieces over the divisor z_1...z_{a-1}: the gen_c coefficients
    // of f'' are divisible by z_c and turn into plain dz_c coefficients
    auto downgrade = [&](const LogPForm& g) {
        LogPForm h = LogPForm::zero(g.m, g.nt, g.a - 1, g.degree);
        for (const auto& P : mi::all(g.m, g.degree)) {
            Poly cc = g.coeff(P);
            if (cc.is_zero()) continue;
            if (mi::contains(P, c)) {
                auto q = cc.divide_z(c);
                if (!q) throw Error("reduce: residue block not divisible");
                cc = *q;
            }
            h.coeff(P) = cc;
        }
        return h;
    };
    LogPForm fp_d = downgrade(fp);
    LogPForm fpp_d = downgrade(fpp_same);

    auto left = reduce_to_constants(fp_d);
    auto right = reduce_to_constants(fpp_d);

    for (const auto& [I, v] : left.constants) {
        auto [sign, K] = mi::insert(c, I);
        if (sign == 0) continue;
        CRat val = (sign < 0) ? -v : v;
        auto it = out.constants.find(K);
        if (it == out.constants.end()) out.constants[K] = val;
        else it->second = it->second + val;
    }
    for (const auto& [I, v] : right.constants) {
        auto it = out.constants.find(I);
        if (it == out.constants.end()) out.constants[I] = v;
        else it->second = it->second + v;
    }
    for (auto it = out.constants.begin(); it != out.constants.end();)
        it = it->second.is_zero() ? out.constants.erase(it) : std::next(it);

    auto upgrade = [&](const LogPForm& g) {
        LogPForm h = LogPForm::zero(g.m, g.nt, f.a, g.degree);
        for (const auto& P : mi::all(g.m, g.degree)) {
            Poly cc = g.coeff(P);
            if (cc.is_zero()) continue;
            if (mi::contains(P, c)) cc = cc * Poly::variable_z(g.m, g.nt, c);
            h.coeff(P) = cc;
        }
        return h;
    };
    LogPForm prim = LogPForm::zero(f.m, f.nt, f.a, std::max(f.degree - 1, 0));
    if (f.degree >= 1) {
        if (f.degree >= 2) {
            LogPForm pl = upgrade(left.primitive); // degree p-2 over divisor a
            for (const auto& Q : mi::all(f.m, pl.degree)) {
                const Poly& cc = pl.coeff(Q);
                if (cc.is_zero()) continue;
                auto [sign, K] = mi::insert(c, Q);
                if (sign == 0) continue;
                Poly term = (sign < 0) ? -cc : cc;
                prim.coeff(K) = prim.coeff(K) - term; // minus gen_c ^ prim'
            }
        }
        prim = prim + upgrade(right.primitive);
    }
    out.primitive = prim;
    return out;
}

LogPForm constants_form(const std::map<mi::Index, CRat>& constants, int m, int nt, int a,
                        int degree) {
    LogPForm out = LogPForm::zero(m, nt, a, degree);
    for (const auto& [I, v] : constants)
        out.coeff(I) = out.coeff(I) + Poly::constant(m, nt, v);
    return out;
}

} // namespace fiskit
