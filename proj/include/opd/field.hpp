#ifndef OPD_FIELD_HPP
#define OPD_FIELD_HPP

#include <cstdint>
#include <gmpxx.h>
#include <string>

#include "opd/error.hpp"

namespace opd {

/* Coefficient field: exact rationals or a prime field F_p with p < 2^31. */
struct FieldSpec {
    enum class Kind { Rationals, Prime };
    Kind kind = Kind::Rationals;
    std::uint32_t p = 0;

    static FieldSpec rationals() { return FieldSpec{Kind::Rationals, 0}; }
    static FieldSpec prime(std::uint32_t p);

    bool operator==(const FieldSpec& o) const { return kind == o.kind && p == o.p; }
    bool operator!=(const FieldSpec& o) const { return !(*this == o); }
    std::string str() const;
};

bool is_prime_u32(std::uint32_t n);

/* One field element.  The field tag travels with the value; mixing fields throws. */
class Scalar {
  public:
    Scalar() : field_(FieldSpec::rationals()), q_(0), r_(0) {}
    static Scalar zero(const FieldSpec& f) { return Scalar(f); }
    static Scalar one(const FieldSpec& f);
    static Scalar of_int(const FieldSpec& f, long v);
    static Scalar of_rational(const FieldSpec& f, const mpq_class& v);

    const FieldSpec& field() const { return field_; }
    bool is_zero() const;
    bool is_one() const;

    Scalar operator+(const Scalar& o) const;
    Scalar operator-(const Scalar& o) const;
    Scalar operator*(const Scalar& o) const;
    Scalar operator-() const;
    Scalar inverse() const;
    Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
    Scalar& operator*=(const Scalar& o) { return *this = *this * o; }

    bool operator==(const Scalar& o) const;
    bool operator!=(const Scalar& o) const { return !(*this == o); }

    /* Exact decimal-free rendering: "num/den" over Q, residue over F_p. */
    std::string str() const;
    static Scalar parse(const FieldSpec& f, const std::string& text);

    const mpq_class& rational() const { return q_; }
    std::uint32_t residue() const { return r_; }

  private:
    explicit Scalar(const FieldSpec& f) : field_(f), q_(0), r_(0) {}
    void check_same(const Scalar& o) const
    {
        require(field_ == o.field_, "scalar field mismatch: ", field_.str(), " vs ", o.field_.str());
    }

    FieldSpec field_;
    mpq_class q_;       // used when kind == Rationals
    std::uint32_t r_;   // used when kind == Prime
};

}  // namespace opd

#endif
