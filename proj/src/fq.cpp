#include "shtuka/fq.hpp"

#include <map>
#include <mutex>

namespace shtuka {

namespace {

bool prime(std::uint32_t n) {
    if (n < 2) return false;
    for (std::uint32_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

std::uint64_t ipow(std::uint64_t b, std::uint32_t e) {
    std::uint64_t r = 1;
    while (e--) r *= b;
    return r;
}

// trim trailing zero coefficients
void trim(std::vector<std::uint32_t>& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

// remainder of a modulo monic m, coefficients mod p
std::vector<std::uint32_t> poly_rem(std::vector<std::uint32_t> a,
                                    const std::vector<std::uint32_t>& m, std::uint32_t p) {
    trim(a);
    const std::size_t dm = m.size() - 1;
    while (a.size() > dm) {
        std::uint32_t lead = a.back();
        std::size_t shift = a.size() - 1 - dm;
        if (lead != 0)
            for (std::size_t i = 0; i <= dm; ++i) {
                std::uint64_t v = a[i + shift] + std::uint64_t(p - 1) * lead % p * m[i];
                a[i + shift] = std::uint32_t(v % p);
            }
        a.pop_back();
        trim(a);
        if (a.size() <= dm) break;
    }
    return a;
}

std::vector<std::uint32_t> poly_mul(const std::vector<std::uint32_t>& a,
                                    const std::vector<std::uint32_t>& b, std::uint32_t p) {
    if (a.empty() || b.empty()) return {};
    std::vector<std::uint32_t> r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            r[i + j] = std::uint32_t((r[i + j] + std::uint64_t(a[i]) * b[j]) % p);
    return r;
}

constexpr std::uint32_t kTableLimit = 512;

} // namespace

bool is_irreducible_mod_p(std::uint32_t p, const std::vector<std::uint32_t>& poly) {
    std::vector<std::uint32_t> f = poly;
    trim(f);
    if (f.size() < 2) return false;
    std::size_t deg = f.size() - 1;
    if (deg == 1) return true;
    // enumerate monic divisors of degree d = 1 .. deg/2
    for (std::size_t d = 1; 2 * d <= deg; ++d) {
        std::uint64_t count = ipow(p, std::uint32_t(d));
        for (std::uint64_t idx = 0; idx < count; ++idx) {
            std::vector<std::uint32_t> g(d + 1, 0);
            std::uint64_t t = idx;
            for (std::size_t i = 0; i < d; ++i) { g[i] = std::uint32_t(t % p); t /= p; }
            g[d] = 1;
            if (poly_rem(f, g, p).empty()) return false;
        }
    }
    return true;
}

std::vector<std::uint32_t> find_irreducible(std::uint32_t p, std::uint32_t degree) {
    if (degree == 1) return {0, 1}; // x
    std::uint64_t count = ipow(p, degree);
    for (std::uint64_t idx = 0; idx < count; ++idx) {
        std::vector<std::uint32_t> g(degree + 1, 0);
        std::uint64_t t = idx;
        for (std::size_t i = 0; i < degree; ++i) { g[i] = std::uint32_t(t % p); t /= p; }
        g[degree] = 1;
        if (is_irreducible_mod_p(p, g)) return g;
    }
    throw std::logic_error("no irreducible polynomial found"); // unreachable
}

FqField::FqField(std::uint32_t p, std::uint32_t e, std::vector<std::uint32_t> modulus)
    : p_(p), e_(e), modulus_(std::move(modulus)) {
    if (!prime(p_)) throw std::invalid_argument("FqField: p is not prime");
    if (e_ == 0) throw std::invalid_argument("FqField: e must be positive");
    std::uint64_t q = ipow(p_, e_);
    if (q > (1u << 16)) throw std::invalid_argument("FqField: q exceeds the 2^16 budget");
    q_ = std::uint32_t(q);
    if (modulus_.size() != e_ + 1 || modulus_[e_] != 1)
        throw std::invalid_argument("FqField: modulus must be monic of degree e");
    for (auto& c : modulus_) c %= p_;
    modulus_[e_] = 1;
    if (!is_irreducible_mod_p(p_, modulus_))
        throw std::invalid_argument("FqField: modulus is reducible");

    if (q_ <= kTableLimit) {
        add_table_.resize(std::size_t(q_) * q_);
        mul_table_.resize(std::size_t(q_) * q_);
        for (fq_t a = 0; a < q_; ++a)
            for (fq_t b = 0; b < q_; ++b) {
                add_table_[std::size_t(a) * q_ + b] = add_slow(a, b);
                mul_table_[std::size_t(a) * q_ + b] = mul_slow(a, b);
            }
        inv_table_.assign(q_, 0);
        for (fq_t a = 1; a < q_; ++a)
            for (fq_t b = 1; b < q_; ++b)
                if (mul_table_[std::size_t(a) * q_ + b] == 1) { inv_table_[a] = b; break; }
        pow_table_.resize(q_);
        for (fq_t a = 0; a < q_; ++a) pow_table_[a] = pow(a, p_);
    }
}

std::shared_ptr<const FqField> FqField::make(std::uint32_t p, std::uint32_t e,
                                             std::vector<std::uint32_t> modulus) {
    return std::make_shared<const FqField>(p, e, std::move(modulus));
}

std::shared_ptr<const FqField> FqField::with_q(std::uint32_t q) {
    static std::mutex mu;
    static std::map<std::uint32_t, std::shared_ptr<const FqField>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(q);
    if (it != cache.end()) return it->second;

    std::uint32_t p = 0, e = 0;
    for (std::uint32_t cand = 2; cand <= q; ++cand) {
        if (!prime(cand)) continue;
        std::uint64_t pw = cand;
        std::uint32_t k = 1;
        while (pw < q) { pw *= cand; ++k; }
        if (pw == q) { p = cand; e = k; break; }
    }
    if (p == 0) throw std::invalid_argument("with_q: q is not a prime power");
    std::vector<std::uint32_t> mod;
    if (e == 1) mod = {0, 1};
    else if (q == 4) mod = {1, 1, 1};        // x^2+x+1
    else if (q == 8) mod = {1, 1, 0, 1};     // x^3+x+1
    else if (q == 9) mod = {1, 0, 1};        // x^2+1
    else mod = find_irreducible(p, e);
    auto f = make(p, e, std::move(mod));
    cache[q] = f;
    return f;
}

std::vector<std::uint32_t> FqField::decode(fq_t v) const {
    std::vector<std::uint32_t> c(e_);
    for (std::uint32_t i = 0; i < e_; ++i) { c[i] = v % p_; v /= p_; }
    return c;
}

fq_t FqField::encode(const std::vector<std::uint32_t>& c) const {
    fq_t v = 0;
    for (std::size_t i = std::min<std::size_t>(c.size(), e_); i-- > 0;)
        v = v * p_ + c[i] % p_;
    return v;
}

fq_t FqField::add_slow(fq_t a, fq_t b) const {
    auto ca = decode(a), cb = decode(b);
    for (std::uint32_t i = 0; i < e_; ++i) ca[i] = (ca[i] + cb[i]) % p_;
    return encode(ca);
}

std::vector<std::uint32_t> FqField::poly_mul_mod(const std::vector<std::uint32_t>& a,
                                                 const std::vector<std::uint32_t>& b) const {
    auto r = poly_rem(poly_mul(a, b, p_), modulus_, p_);
    r.resize(e_, 0);
    return r;
}

fq_t FqField::mul_slow(fq_t a, fq_t b) const {
    return encode(poly_mul_mod(decode(a), decode(b)));
}

fq_t FqField::add(fq_t a, fq_t b) const {
    if (!add_table_.empty()) return add_table_[std::size_t(a) * q_ + b];
    return add_slow(a, b);
}

fq_t FqField::neg(fq_t a) const {
    auto c = decode(a);
    for (auto& x : c) x = (p_ - x) % p_;
    return encode(c);
}

fq_t FqField::sub(fq_t a, fq_t b) const { return add(a, neg(b)); }

fq_t FqField::mul(fq_t a, fq_t b) const {
    if (!mul_table_.empty()) return mul_table_[std::size_t(a) * q_ + b];
    return mul_slow(a, b);
}

fq_t FqField::pow(fq_t a, std::uint64_t n) const {
    fq_t r = 1, base = a;
    if (n == 0) return 1;
    while (n) {
        if (n & 1) r = mul(r, base);
        base = mul(base, base);
        n >>= 1;
    }
    return r;
}

fq_t FqField::inv(fq_t a) const {
    if (a == 0) throw std::domain_error("FqField::inv of zero");
    if (!inv_table_.empty()) return inv_table_[a];
    return pow(a, std::uint64_t(q_) - 2);
}

fq_t FqField::from_int(std::int64_t n) const {
    std::int64_t m = n % std::int64_t(p_);
    if (m < 0) m += p_;
    return fq_t(m);
}

std::string FqField::to_string(fq_t v) const {
    if (e_ == 1) return std::to_string(v);
    auto c = decode(v);
    std::string s;
    for (std::uint32_t i = 0; i < e_; ++i) {
        if (c[i] == 0) continue;
        if (!s.empty()) s += "+";
        if (i == 0 || c[i] != 1) s += std::to_string(c[i]);
        if (i >= 1) {
            if (c[i] != 1) s += "*";
            s += "x";
            if (i > 1) s += "^" + std::to_string(i);
        }
    }
    return s.empty() ? "0" : s;
}

} // namespace shtuka
