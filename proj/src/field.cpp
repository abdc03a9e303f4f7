#include "opd/field.hpp"

namespace opd {

bool is_prime_u32(std::uint32_t n)
{
    if (n < 2)
        return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0)
            return false;
    return true;
}

FieldSpec FieldSpec::prime(std::uint32_t p)
{
    require(p < (1u << 31), "prime modulus must be < 2^31, got ", p);
    require(is_prime_u32(p), "modulus ", p, " is not prime");
    return FieldSpec{Kind::Prime, p};
}

std::string FieldSpec::str() const
{
    if (kind == Kind::Rationals)
        return "q";
    return "fp:" + std::to_string(p);
}

Scalar Scalar::one(const FieldSpec& f)
{
    Scalar s(f);
    if (f.kind == FieldSpec::Kind::Rationals)
        s.q_ = 1;
    else
        s.r_ = 1 % f.p;
    return s;
}

Scalar Scalar::of_int(const FieldSpec& f, long v)
{
    Scalar s(f);
    if (f.kind == FieldSpec::Kind::Rationals)
        s.q_ = v;
    else {
        long m = v % (long)f.p;
        if (m < 0)
            m += f.p;
        s.r_ = (std::uint32_t)m;
    }
    return s;
}

Scalar Scalar::of_rational(const FieldSpec& f, const mpq_class& v)
{
    if (f.kind == FieldSpec::Kind::Rationals) {
        Scalar s(f);
        s.q_ = v;
        s.q_.canonicalize();
        return s;
    }
    // reduce num/den mod p; den must be invertible
    mpz_class num = v.get_num(), den = v.get_den();
    mpz_class p = (unsigned long)f.p;
    mpz_class nm = num % p, dm = den % p;
    if (nm < 0)
        nm += p;
    if (dm < 0)
        dm += p;
    require(dm != 0, "denominator not invertible mod ", f.p);
    Scalar n = Scalar::of_int(f, nm.get_si());
    Scalar d = Scalar::of_int(f, dm.get_si());
    return n * d.inverse();
}

bool Scalar::is_zero() const
{
    return field_.kind == FieldSpec::Kind::Rationals ? q_ == 0 : r_ == 0;
}

bool Scalar::is_one() const
{
    return field_.kind == FieldSpec::Kind::Rationals ? q_ == 1 : r_ == 1 % field_.p;
}

Scalar Scalar::operator+(const Scalar& o) const
{
    check_same(o);
    Scalar s(field_);
    if (field_.kind == FieldSpec::Kind::Rationals)
        s.q_ = q_ + o.q_;
    else
        s.r_ = (std::uint32_t)(((std::uint64_t)r_ + o.r_) % field_.p);
    return s;
}

Scalar Scalar::operator-(const Scalar& o) const { return *this + (-o); }

Scalar Scalar::operator*(const Scalar& o) const
{
    check_same(o);
    Scalar s(field_);
    if (field_.kind == FieldSpec::Kind::Rationals)
        s.q_ = q_ * o.q_;
    else
        s.r_ = (std::uint32_t)(((std::uint64_t)r_ * o.r_) % field_.p);
    return s;
}

Scalar Scalar::operator-() const
{
    Scalar s(field_);
    if (field_.kind == FieldSpec::Kind::Rationals)
        s.q_ = -q_;
    else
        s.r_ = r_ == 0 ? 0 : field_.p - r_;
    return s;
}

Scalar Scalar::inverse() const
{
    require(!is_zero(), "division by zero");
    Scalar s(field_);
    if (field_.kind == FieldSpec::Kind::Rationals) {
        s.q_ = 1 / q_;
        return s;
    }
    // extended euclid on (r_, p)
    std::int64_t a = r_, b = field_.p, x0 = 1, x1 = 0;
    while (b != 0) {
        std::int64_t q = a / b;
        std::int64_t t = a - q * b;
        a = b;
        b = t;
        t = x0 - q * x1;
        x0 = x1;
        x1 = t;
    }
    std::int64_t inv = x0 % (std::int64_t)field_.p;
    if (inv < 0)
        inv += field_.p;
    s.r_ = (std::uint32_t)inv;
    return s;
}

bool Scalar::operator==(const Scalar& o) const
{
    if (field_ != o.field_)
        return false;
    return field_.kind == FieldSpec::Kind::Rationals ? q_ == o.q_ : r_ == o.r_;
}

std::string Scalar::str() const
{
    if (field_.kind == FieldSpec::Kind::Rationals)
        return q_.get_str();
    return std::to_string(r_);
}

Scalar Scalar::parse(const FieldSpec& f, const std::string& text)
{
    require(!text.empty(), "empty scalar literal");
    if (f.kind == FieldSpec::Kind::Rationals) {
        mpq_class q;
        require(q.set_str(text, 10) == 0, "bad rational literal '", text, "'");
        q.canonicalize();
        return of_rational(f, q);
    }
    mpq_class q;
    require(q.set_str(text, 10) == 0, "bad scalar literal '", text, "'");
    return of_rational(f, q);
}

}  // namespace opd
