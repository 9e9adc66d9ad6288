#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fiskit/multiindex.hpp"

namespace fiskit {

/// Exact rational with int64 numerator/denominator, gcd-normalized.
/// Intermediate products run through 128-bit integers; overflow throws.
struct Rational {
    long long num = 0;
    long long den = 1;

    Rational() = default;
    Rational(long long n) : num(n) {}
    Rational(long long n, long long d);

    Rational operator+(const Rational& o) const;
    Rational operator-(const Rational& o) const;
    Rational operator*(const Rational& o) const;
    Rational operator/(const Rational& o) const;
    Rational operator-() const { return {-num, den}; }
    bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
    bool is_zero() const { return num == 0; }
    double to_double() const { return double(num) / double(den); }
};

/// Complex number with exact rational parts.
struct CRat {
    Rational re, im;
    CRat() = default;
    CRat(Rational r) : re(r) {}
    CRat(Rational r, Rational i) : re(r), im(i) {}
    static CRat i() { return {Rational(0), Rational(1)}; }

    CRat operator+(const CRat& o) const { return {re + o.re, im + o.im}; }
    CRat operator-(const CRat& o) const { return {re - o.re, im - o.im}; }
    CRat operator*(const CRat& o) const {
        return {re * o.re - im * o.im, re * o.im + im * o.re};
    }
    CRat operator-() const { return {-re, -im}; }
    bool operator==(const CRat& o) const { return re == o.re && im == o.im; }
    bool is_zero() const { return re.is_zero() && im.is_zero(); }
};

/// Monomial exponents in z (Laurent: possibly negative), zbar and t (>= 0).
struct Monomial {
    std::vector<int> z, zbar, t;
    bool operator<(const Monomial& o) const;
    bool operator==(const Monomial& o) const = default;
    std::string str() const;
};

/// Exact Laurent polynomial in m complex variables (plus conjugates) and nt
/// real variables. Poles are allowed in the z variables only.
class Poly {
public:
    Poly() = default;
    Poly(int m, int nt) : m_(m), nt_(nt) {}
    static Poly constant(int m, int nt, CRat c);
    static Poly variable_z(int m, int nt, int rho, int power = 1);
    static Poly variable_zbar(int m, int nt, int rho);
    static Poly variable_t(int m, int nt, int tau);

    int m() const { return m_; }
    int nt() const { return nt_; }
    const std::map<Monomial, CRat>& terms() const { return terms_; }

    void add_term(Monomial mono, CRat c);
    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator*(const Poly& o) const;
    Poly operator*(const CRat& c) const;
    Poly operator-() const { return *this * CRat(Rational(-1)); }
    bool operator==(const Poly& o) const { return terms_ == o.terms_; }

    bool is_zero() const { return terms_.empty(); }
    /// no negative z exponents
    bool is_regular() const;
    /// depends only on z (no zbar, no t)
    bool is_z_only() const;
    bool depends_on_z(int rho) const;

    /// d/dz_rho on Laurent monomials (exact).
    Poly dz(int rho) const;
    Poly dzbar(int rho) const;
    Poly dt(int tau) const;

    /// multiply by z_1 ... z_a (exponent shift)
    Poly shift_z(int a, int amount) const;
    /// divide by z_rho for rho < a; returns nothing when not exactly divisible
    /// (witness receives the offending monomial).
    std::optional<Poly> divide_coords(int a, std::string* witness = nullptr) const;
    std::optional<Poly> divide_z(int rho, std::string* witness = nullptr) const;
    /// evaluate z_rho = 0: drops monomials with positive exponent; throws on
    /// pole in that variable.
    Poly at_z_zero(int rho) const;
    /// reindex: remove variable z_rho (which must not occur).
    Poly drop_z(int rho) const;
    Poly lift_z(int at) const; // insert a fresh z variable at position `at`

private:
    int m_ = 0, nt_ = 0;
    std::map<Monomial, CRat> terms_;
};

/// A p-form over the z multi-indices with Poly coefficients.
struct PolyForm {
    int m = 0, nt = 0, degree = 0;
    std::vector<Poly> coeffs; // lexicographic increasing multi-indices

    static PolyForm zero(int m, int nt, int degree);
    Poly& coeff(const mi::Index& P);
    const Poly& coeff(const mi::Index& P) const;
    bool is_zero() const;
    PolyForm operator+(const PolyForm& o) const;
    PolyForm operator-(const PolyForm& o) const;
};

PolyForm wedge(const PolyForm& a, const PolyForm& b);
/// Exterior derivative; requires all coefficients z-only.
PolyForm d(const PolyForm& a);

/// Normal crossing hypersurface { z_1 ... z_a = 0 } with minimal defining
/// function F = z_1 ... z_a.
struct NCHypersurface {
    int a = 0;
    int m = 0;
};

/// Logarithmic p-form stored over the generator basis
/// {dz_1/z_1, ..., dz_a/z_a, dz_{a+1}, ..., dz_m}: coefficients are regular
/// basic polynomials by construction.
struct LogPForm {
    int m = 0, nt = 0, a = 0, degree = 0;
    std::vector<Poly> coeffs;

    static LogPForm zero(int m, int nt, int a, int degree);
    Poly& coeff(const mi::Index& P);
    const Poly& coeff(const mi::Index& P) const;
    bool is_zero() const;
    LogPForm operator+(const LogPForm& o) const;
    LogPForm operator-(const LogPForm& o) const;

    /// expansion back to Laurent coefficients over plain dz_P
    PolyForm to_laurent() const;
};

/// d on log forms, computed in the generator basis (exact).
LogPForm d_log(const LogPForm& f);

struct MembershipResult {
    bool member = false;
    std::string violated; // names the failing condition when !member
    LogPForm normalized;  // valid when member
};

// --- operations ---------------------------------------------------------------

bool is_basic_pform(const PolyForm& f);

/// Homotopy for closed basic p-forms (p >= 1): g with d g = f, exact.
PolyForm poincare_homotopy(const PolyForm& f);

/// F = z_1...z_rho division of a basic function: exact quotient or
/// NotDivisible with the witness monomial.
Poly divide_by_coords(const Poly& F, int rho);

/// Both membership conditions (F f regular and F df regular) via exact
/// division; returns the generator-basis expansion when passing.
MembershipResult log_membership(const PolyForm& f, const NCHypersurface& D);

/// f = (dz_c/z_c) ^ f' + f'' with f' independent of z_c; exact recomposition.
std::pair<LogPForm, LogPForm> log_decompose(const LogPForm& f, int c);

/// Residue along the smooth component {z_1 = 0} (requires a == 1): the
/// gen_1-coefficient restricted to z_1 = 0, reindexed to m-1 variables.
PolyForm residue(const LogPForm& f);

/// Twist by the divisor bundle: multiply a top-degree member by F. Returns
/// the regular top form; invert exactly with untwist_sD.
PolyForm twist_sD(const LogPForm& f, const NCHypersurface& D);
LogPForm untwist_sD(const PolyForm& g, const NCHypersurface& D);

///(dz_1/z_1) ^ lift(target): a log form whose residue is the target.
LogPForm extend_from_D(const PolyForm& target);

struct ReduceResult {
    // constants over increasing multi-indices within the divisor coordinates
    std::map<mi::Index, CRat> constants;
    LogPForm primitive; // d(primitive) + constants-form = f, exactly
};
ReduceResult reduce_to_constants(const LogPForm& f);

/// The constant combination as a log form (for recomposition checks).
LogPForm constants_form(const std::map<mi::Index, CRat>& constants, int m, int nt, int a,
                        int degree);

} // namespace fiskit
