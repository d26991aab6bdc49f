#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace shtuka {

// Elements of F_q = F_p[x]/(modulus) are stored as canonical indices
// v = sum c_i p^i where (c_0,...,c_{e-1}) are the polynomial coordinates.
// All arithmetic goes through FqField; q must fit in 32 bits and the
// suites only ever use q <= 2^16.
using fq_t = std::uint32_t;

class FqField {
public:
    // modulus: monic irreducible of degree e over F_p, coefficient list
    // c[0] + c[1] x + ... + c[e] x^e with c[e] == 1.
    FqField(std::uint32_t p, std::uint32_t e, std::vector<std::uint32_t> modulus);

    static std::shared_ptr<const FqField> make(std::uint32_t p, std::uint32_t e,
                                               std::vector<std::uint32_t> modulus);
    // Built-in moduli for q in {2,3,4,5,8,9}; any prime q works too.
    static std::shared_ptr<const FqField> with_q(std::uint32_t q);

    std::uint32_t p() const { return p_; }
    std::uint32_t e() const { return e_; }
    std::uint32_t q() const { return q_; }
    const std::vector<std::uint32_t>& modulus() const { return modulus_; }

    fq_t zero() const { return 0; }
    fq_t one() const { return 1; }
    // x as element (image of the polynomial variable); for e == 1 this is 0.
    fq_t gen() const { return e_ == 1 ? 0 : p_; }

    fq_t add(fq_t a, fq_t b) const;
    fq_t sub(fq_t a, fq_t b) const;
    fq_t neg(fq_t a) const;
    fq_t mul(fq_t a, fq_t b) const;
    fq_t inv(fq_t a) const; // throws on 0
    fq_t pow(fq_t a, std::uint64_t n) const;
    // p-power Frobenius, the generator of Gal(F_q/F_p); the q-power map is
    // the identity on F_q.
    fq_t frob(fq_t a) const { return pow_table_.empty() ? pow(a, p_) : pow_table_[a]; }
    // multiplication by the image of an integer scalar
    fq_t from_int(std::int64_t n) const;

    std::vector<std::uint32_t> decode(fq_t v) const;     // length-e digit vector
    fq_t encode(const std::vector<std::uint32_t>& c) const;

    std::string to_string(fq_t v) const;

    bool operator==(const FqField& o) const {
        return p_ == o.p_ && e_ == o.e_ && modulus_ == o.modulus_;
    }

private:
    std::uint32_t p_, e_, q_;
    std::vector<std::uint32_t> modulus_;
    // tables are built when q is small; otherwise ops decode to polynomials
    std::vector<fq_t> add_table_, mul_table_, inv_table_, pow_table_;

    std::vector<std::uint32_t> poly_mul_mod(const std::vector<std::uint32_t>& a,
                                            const std::vector<std::uint32_t>& b) const;
    fq_t mul_slow(fq_t a, fq_t b) const;
    fq_t add_slow(fq_t a, fq_t b) const;
};

using FieldPtr = std::shared_ptr<const FqField>;

// Irreducibility over F_p by trial division against all monic polynomials
// of degree <= deg/2.
bool is_irreducible_mod_p(std::uint32_t p, const std::vector<std::uint32_t>& poly);

// Lexicographically first monic irreducible of the given degree over F_p.
std::vector<std::uint32_t> find_irreducible(std::uint32_t p, std::uint32_t degree);

} // namespace shtuka
