#include "odekit/polynomial.hpp"

#include <algorithm>
#include <random>
#include <set>

#include "odekit/error.hpp"

namespace odekit {

// ---------------------------------------------------------------- Monomial

Monomial::Monomial(std::vector<Factor> factors) : factors_(std::move(factors)) {
    std::sort(factors_.begin(), factors_.end(),
              [](const Factor& a, const Factor& b) { return a.first < b.first; });
    for (const Factor& f : factors_) degree_ += f.second;
}

Monomial Monomial::variable(VariableId v, std::uint32_t e) {
    Monomial m;
    if (e != 0) {
        m.factors_.emplace_back(v, e);
        m.degree_ = e;
    }
    return m;
}

std::uint32_t Monomial::exponent_of(VariableId v) const {
    for (const Factor& f : factors_)
        if (f.first == v) return f.second;
    return 0;
}

Monomial Monomial::operator*(const Monomial& other) const {
    Monomial out;
    out.factors_.reserve(factors_.size() + other.factors_.size());
    auto ia = factors_.begin(), ib = other.factors_.begin();
    while (ia != factors_.end() || ib != other.factors_.end()) {
        if (ib == other.factors_.end() ||
            (ia != factors_.end() && ia->first < ib->first)) {
            out.factors_.push_back(*ia++);
        } else if (ia == factors_.end() || ib->first < ia->first) {
            out.factors_.push_back(*ib++);
        } else {
            out.factors_.emplace_back(ia->first, ia->second + ib->second);
            ++ia;
            ++ib;
        }
    }
    out.degree_ = degree_ + other.degree_;
    return out;
}

bool Monomial::divides(const Monomial& other) const {
    auto ia = factors_.begin();
    auto ib = other.factors_.begin();
    while (ia != factors_.end()) {
        while (ib != other.factors_.end() && ib->first < ia->first) ++ib;
        if (ib == other.factors_.end() || ib->first != ia->first ||
            ib->second < ia->second)
            return false;
        ++ia;
    }
    return true;
}

Monomial Monomial::divide(const Monomial& other) const {
    // this / other, assuming other | this.
    Monomial out;
    auto ib = other.factors_.begin();
    for (const Factor& f : factors_) {
        std::uint32_t e = f.second;
        while (ib != other.factors_.end() && ib->first < f.first) ++ib;
        if (ib != other.factors_.end() && ib->first == f.first) e -= ib->second;
        if (e != 0) {
            out.factors_.emplace_back(f.first, e);
            out.degree_ += e;
        }
    }
    return out;
}

Monomial Monomial::gcd(const Monomial& a, const Monomial& b) {
    Monomial out;
    auto ib = b.factors_.begin();
    for (const Factor& f : a.factors_) {
        while (ib != b.factors_.end() && ib->first < f.first) ++ib;
        if (ib != b.factors_.end() && ib->first == f.first) {
            std::uint32_t e = std::min(f.second, ib->second);
            out.factors_.emplace_back(f.first, e);
            out.degree_ += e;
        }
    }
    return out;
}

int Monomial::compare(const Monomial& a, const Monomial& b) {
    if (a.degree_ != b.degree_) return a.degree_ < b.degree_ ? -1 : 1;
    auto ia = a.factors_.begin(), ib = b.factors_.begin();
    while (ia != a.factors_.end() && ib != b.factors_.end()) {
        if (ia->first < ib->first) return 1;   // a has the earlier variable
        if (ib->first < ia->first) return -1;
        if (ia->second != ib->second) return ia->second < ib->second ? -1 : 1;
        ++ia;
        ++ib;
    }
    if (ia != a.factors_.end()) return 1;
    if (ib != b.factors_.end()) return -1;
    return 0;
}

// -------------------------------------------------------------- Polynomial

Polynomial Polynomial::constant(BigRational c) {
    Polynomial p;
    if (c != 0) p.terms_.emplace(Monomial::one(), std::move(c));
    return p;
}

Polynomial Polynomial::variable(VariableId v) {
    Polynomial p;
    p.terms_.emplace(Monomial::variable(v), BigRational(1));
    return p;
}

Polynomial Polynomial::term(Monomial m, BigRational c) {
    Polynomial p;
    if (c != 0) p.terms_.emplace(std::move(m), std::move(c));
    return p;
}

bool Polynomial::is_constant() const {
    return terms_.empty() ||
           (terms_.size() == 1 && terms_.begin()->first.is_one());
}

BigRational Polynomial::constant_value() const {
    if (terms_.empty()) return BigRational(0);
    return terms_.begin()->second;
}

std::uint64_t Polynomial::total_degree() const {
    return terms_.empty() ? 0 : terms_.begin()->first.total_degree();
}

std::uint32_t Polynomial::degree_in(VariableId v) const {
    std::uint32_t d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, m.exponent_of(v));
    return d;
}

bool Polynomial::contains(VariableId v) const {
    for (const auto& [m, c] : terms_)
        if (m.exponent_of(v) != 0) return true;
    return false;
}

std::vector<VariableId> Polynomial::variables() const {
    std::set<VariableId> vars;
    for (const auto& [m, c] : terms_)
        for (const auto& f : m.factors()) vars.insert(f.first);
    return std::vector<VariableId>(vars.begin(), vars.end());
}

void Polynomial::add_term(const Monomial& m, const BigRational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

Polynomial Polynomial::operator-() const {
    Polynomial out;
    for (const auto& [m, c] : terms_) out.terms_.emplace(m, -c);
    return out;
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
    for (const auto& [m, c] : other.terms_) add_term(m, c);
    return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
    for (const auto& [m, c] : other.terms_) add_term(m, -c);
    return *this;
}

Polynomial& Polynomial::operator*=(const Polynomial& other) {
    Polynomial out;
    for (const auto& [m1, c1] : terms_)
        for (const auto& [m2, c2] : other.terms_) out.add_term(m1 * m2, c1 * c2);
    *this = std::move(out);
    return *this;
}

Polynomial& Polynomial::operator*=(const BigRational& c) {
    if (c == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [m, coeff] : terms_) coeff *= c;
    return *this;
}

Polynomial Polynomial::pow(std::uint32_t e) const {
    Polynomial result = Polynomial::constant(1);
    Polynomial base = *this;
    while (e != 0) {
        if (e & 1u) result *= base;
        e >>= 1u;
        if (e != 0) base *= base;
    }
    return result;
}

Polynomial Polynomial::derivative(VariableId v) const {
    Polynomial out;
    for (const auto& [m, c] : terms_) {
        std::uint32_t e = m.exponent_of(v);
        if (e == 0) continue;
        Monomial reduced = m.divide(Monomial::variable(v));
        out.add_term(reduced, c * e);
    }
    return out;
}

BigRational Polynomial::evaluate(
    const std::map<VariableId, BigRational>& bindings) const {
    BigRational sum(0);
    for (const auto& [m, c] : terms_) {
        BigRational term = c;
        for (const auto& [v, e] : m.factors()) {
            auto it = bindings.find(v);
            if (it == bindings.end()) throw MissingBindingError(variable_name(v));
            BigRational p(1);
            BigRational base = it->second;
            for (std::uint32_t k = 0; k < e; ++k) p *= base;
            term *= p;
        }
        sum += term;
    }
    return sum;
}

Polynomial Polynomial::substitute(
    const std::map<VariableId, Polynomial>& map) const {
    // Memoized powers of each substituted variable.
    std::map<VariableId, std::vector<Polynomial>> powers;
    auto power_of = [&](VariableId v, std::uint32_t e) -> const Polynomial& {
        std::vector<Polynomial>& tab = powers[v];
        if (tab.empty()) {
            tab.push_back(Polynomial::constant(1));
            tab.push_back(map.at(v));
        }
        while (tab.size() <= e) tab.push_back(tab.back() * tab[1]);
        return tab[e];
    };

    Polynomial out;
    for (const auto& [m, c] : terms_) {
        Monomial kept;
        Polynomial replaced = Polynomial::constant(1);
        bool any = false;
        for (const auto& [v, e] : m.factors()) {
            if (map.count(v)) {
                replaced *= power_of(v, e);
                any = true;
            } else {
                kept = kept * Monomial::variable(v, e);
            }
        }
        if (!any) {
            out.add_term(m, c);
        } else {
            for (const auto& [rm, rc] : replaced.terms())
                out.add_term(kept * rm, c * rc);
        }
    }
    return out;
}

Polynomial operator+(Polynomial a, const Polynomial& b) {
    a += b;
    return a;
}

Polynomial operator-(Polynomial a, const Polynomial& b) {
    a -= b;
    return a;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    Polynomial out = a;
    out *= b;
    return out;
}

Polynomial operator*(Polynomial a, const BigRational& c) {
    a *= c;
    return a;
}

Polynomial operator*(const BigRational& c, Polynomial a) {
    a *= c;
    return a;
}

bool try_divide(const Polynomial& a, const Polynomial& b, Polynomial& quotient) {
    if (b.is_zero()) throw DivisionByZeroError("polynomial division");
    Polynomial q;
    Polynomial r = a;
    const Monomial& lb = b.is_zero() ? Monomial::one() : b.leading_monomial();
    while (!r.is_zero()) {
        const Monomial& lr = r.leading_monomial();
        if (!lb.divides(lr)) return false;
        Monomial m = lr.divide(lb);
        BigRational c = r.leading_coefficient() / b.leading_coefficient();
        Polynomial t = Polynomial::term(m, c);
        q += t;
        r -= t * b;
    }
    quotient = std::move(q);
    return true;
}

std::pair<BigRational, Polynomial> primitive_decomposition(const Polynomial& p) {
    if (p.is_zero()) return {BigRational(0), Polynomial()};
    BigInt den_lcm(1);
    for (const auto& [m, c] : p.terms()) {
        const BigInt& d = boost::multiprecision::denominator(c);
        den_lcm = boost::multiprecision::lcm(den_lcm, d);
    }
    BigInt num_gcd(0);
    for (const auto& [m, c] : p.terms()) {
        BigInt scaled = boost::multiprecision::numerator(c) *
                        (den_lcm / boost::multiprecision::denominator(c));
        num_gcd = boost::multiprecision::gcd(num_gcd, scaled);
    }
    BigRational content(num_gcd, den_lcm);
    if (p.leading_coefficient() < 0) content = -content;
    Polynomial primitive = p;
    BigRational inv = BigRational(1) / content;
    primitive *= inv;
    return {content, primitive};
}

namespace {

// Univariate view of a polynomial in a chosen main variable: exponent ->
// coefficient polynomial in the remaining variables.
using UniView = std::map<std::uint32_t, Polynomial>;

UniView univariate_view(const Polynomial& p, VariableId v) {
    UniView view;
    Monomial vm = Monomial::variable(v);
    for (const auto& [m, c] : p.terms()) {
        std::uint32_t e = m.exponent_of(v);
        Monomial rest = e == 0 ? m : m.divide(Monomial::variable(v, e));
        view[e].add_term(rest, c);
    }
    return view;
}

std::uint32_t uni_degree(const UniView& view) {
    return view.empty() ? 0 : view.rbegin()->first;
}

// Content of p with respect to v: gcd of the univariate-view coefficients.
Polynomial content_wrt(const UniView& view) {
    Polynomial c;
    for (const auto& [e, coeff] : view) {
        c = poly_gcd(c, coeff);
        if (c.is_constant() && !c.is_zero()) break;
    }
    return c;
}

Polynomial exact_divide(const Polynomial& a, const Polynomial& b) {
    Polynomial q;
    if (!try_divide(a, b, q)) throw Error("internal: exact division failed");
    return q;
}

// Pseudo-remainder of f by g in main variable v (degrees taken in v).
Polynomial pseudo_rem(const Polynomial& f, const Polynomial& g, VariableId v) {
    UniView gv = univariate_view(g, v);
    std::uint32_t dg = uni_degree(gv);
    const Polynomial& lg = gv.rbegin()->second;
    Polynomial r = f;
    while (!r.is_zero()) {
        UniView rv = univariate_view(r, v);
        std::uint32_t dr = uni_degree(rv);
        if (dr < dg) break;
        const Polynomial& lr = rv.rbegin()->second;
        Polynomial shift = Polynomial::term(Monomial::variable(v, dr - dg), BigRational(1));
        r = lg * r - lr * shift * g;
    }
    return r;
}

// Common monomial factor of all terms of p.
Monomial monomial_content(const Polynomial& p) {
    bool first = true;
    Monomial m;
    for (const auto& [mon, c] : p.terms()) {
        if (first) {
            m = mon;
            first = false;
        } else {
            m = Monomial::gcd(m, mon);
        }
        if (m.is_one()) break;
    }
    return m;
}

Polynomial divide_monomial(const Polynomial& p, const Monomial& m) {
    if (m.is_one()) return p;
    Polynomial out;
    for (const auto& [mon, c] : p.terms()) out.add_term(mon.divide(m), c);
    return out;
}

Polynomial normalize_primitive(const Polynomial& p) {
    return primitive_decomposition(p).second;
}

// Primitive part with respect to v including the numeric content, so
// pseudo-remainder sequences keep both polynomial and integer growth down.
Polynomial full_primitive_wrt(const Polynomial& p, VariableId v) {
    UniView view = univariate_view(p, v);
    Polynomial c = content_wrt(view);
    return normalize_primitive(exact_divide(p, c));
}

// --- Exact coprimality certificate -----------------------------------------
//
// For any common divisor G of f and g and any evaluation a of the variables
// other than v that preserves deg_v(f), the image of G keeps its v-degree and
// divides gcd(f(v,a), g(v,a)).  A degree-0 univariate image gcd therefore
// proves deg_v(G) = 0.  Certifying this for every shared variable proves the
// gcd is monomial-free, which after content extraction means it is constant.

using UniPoly = std::vector<BigRational>;  // index = exponent

int uni_deg(const UniPoly& p) {
    for (int i = static_cast<int>(p.size()) - 1; i >= 0; --i)
        if (p[i] != 0) return i;
    return -1;
}

UniPoly evaluate_to_univariate(const Polynomial& p, VariableId v,
                               const std::map<VariableId, BigRational>& point) {
    UniPoly out(p.degree_in(v) + 1, BigRational(0));
    for (const auto& [m, c] : p.terms()) {
        BigRational value = c;
        std::uint32_t ev = 0;
        for (const auto& [var, e] : m.factors()) {
            if (var == v) {
                ev = e;
                continue;
            }
            const BigRational& x = point.at(var);
            for (std::uint32_t k = 0; k < e; ++k) value *= x;
        }
        out[ev] += value;
    }
    return out;
}

int univariate_gcd_degree(UniPoly f, UniPoly g) {
    int df = uni_deg(f), dg = uni_deg(g);
    if (df < 0) return dg;
    if (dg < 0) return df;
    if (df < dg) {
        std::swap(f, g);
        std::swap(df, dg);
    }
    while (dg >= 0) {
        // Make g monic, then reduce f modulo g.
        BigRational lead = g[dg];
        for (int i = 0; i <= dg; ++i) g[i] /= lead;
        while (df >= dg) {
            BigRational c = f[df];
            if (c != 0)
                for (int i = 0; i <= dg; ++i) f[df - dg + i] -= c * g[i];
            f[df] = 0;
            df = uni_deg(f);
            if (df < 0) break;
        }
        std::swap(f, g);
        df = uni_deg(f);
        dg = uni_deg(g);
    }
    return df;
}

bool certify_coprime(const Polynomial& f, const Polynomial& g,
                     const std::vector<VariableId>& shared) {
    std::mt19937_64 rng(0x5eedc0de);
    std::uniform_int_distribution<int> value(-39, 39);
    std::vector<VariableId> all;
    {
        std::set<VariableId> s;
        for (VariableId v : f.variables()) s.insert(v);
        for (VariableId v : g.variables()) s.insert(v);
        all.assign(s.begin(), s.end());
    }
    for (VariableId v : shared) {
        bool certified = false;
        for (int attempt = 0; attempt < 8 && !certified; ++attempt) {
            std::map<VariableId, BigRational> point;
            for (VariableId w : all)
                if (!(w == v)) point.emplace(w, BigRational(value(rng)));
            UniPoly fi = evaluate_to_univariate(f, v, point);
            if (uni_deg(fi) != static_cast<int>(f.degree_in(v))) continue;
            UniPoly gi = evaluate_to_univariate(g, v, point);
            if (univariate_gcd_degree(std::move(fi), std::move(gi)) == 0)
                certified = true;
            else
                return false;  // plausible common factor: run the full PRS
        }
        if (!certified) return false;
    }
    return true;
}

}  // namespace

Polynomial poly_gcd(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero()) return normalize_primitive(b);
    if (b.is_zero()) return normalize_primitive(a);
    if (a.is_constant() || b.is_constant()) return Polynomial::constant(1);

    // Split off common monomial factors first; they are exact and cheap.
    Monomial ma = monomial_content(a);
    Monomial mb = monomial_content(b);
    Monomial shared = Monomial::gcd(ma, mb);
    Polynomial pa = divide_monomial(a, ma);
    Polynomial pb = divide_monomial(b, mb);
    Polynomial mono = Polynomial::term(shared, BigRational(1));

    if (pa.is_constant() || pb.is_constant()) return mono;

    // Disjoint variable sets cannot share a nonmonomial factor.
    {
        std::vector<VariableId> va = pa.variables();
        std::vector<VariableId> vb = pb.variables();
        bool meet = false;
        for (VariableId v : va) {
            if (std::binary_search(vb.begin(), vb.end(), v)) {
                meet = true;
                break;
            }
        }
        if (!meet) return mono;
    }

    Polynomial npa = normalize_primitive(pa);
    Polynomial npb = normalize_primitive(pb);
    if (npa == npb) return mono * npa;

    {
        Polynomial q;
        if (try_divide(npa, npb, q)) return mono * npb;
        if (try_divide(npb, npa, q)) return mono * npa;
    }

    std::vector<VariableId> va = npa.variables();
    std::vector<VariableId> vb = npb.variables();
    std::vector<VariableId> shared_vars;
    for (VariableId w : va)
        if (std::binary_search(vb.begin(), vb.end(), w)) shared_vars.push_back(w);

    // Certified-coprime inputs (the common case for reduced fractions) never
    // reach the remainder sequence.
    if (certify_coprime(npa, npb, shared_vars)) return mono;

    // Primitive pseudo-remainder sequence in a shared main variable, chosen
    // to keep the smaller of the two degrees minimal.
    VariableId best = shared_vars.front();
    std::uint64_t best_key = ~0ull;
    for (VariableId v : shared_vars) {
        std::uint32_t da = npa.degree_in(v);
        std::uint32_t db = npb.degree_in(v);
        std::uint64_t key =
            (static_cast<std::uint64_t>(std::min(da, db)) << 32) | (da + db);
        if (key < best_key) {
            best_key = key;
            best = v;
        }
    }
    VariableId v = best;

    UniView view_a = univariate_view(npa, v);
    UniView view_b = univariate_view(npb, v);
    Polynomial cont_a = content_wrt(view_a);
    Polynomial cont_b = content_wrt(view_b);
    Polynomial f = normalize_primitive(exact_divide(npa, cont_a));
    Polynomial g = normalize_primitive(exact_divide(npb, cont_b));
    Polynomial cont = poly_gcd(cont_a, cont_b);

    if (univariate_view(f, v).empty() ||
        uni_degree(univariate_view(f, v)) < uni_degree(univariate_view(g, v)))
        std::swap(f, g);

    while (true) {
        Polynomial r = pseudo_rem(f, g, v);
        if (r.is_zero()) break;
        if (univariate_view(r, v).size() == 1 &&
            univariate_view(r, v).begin()->first == 0) {
            // Nonzero remainder of degree 0 in v: the primitive parts are
            // coprime in v.
            g = Polynomial::constant(1);
            break;
        }
        f = std::move(g);
        g = full_primitive_wrt(r, v);
    }

    Polynomial result = mono * cont * normalize_primitive(g);
    return normalize_primitive(result) ;
}

}  // namespace odekit
