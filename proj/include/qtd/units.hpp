#pragma once

#include <stdexcept>

// Unit conventions used across the library.
//
// Kernel computations are carried out in natural units: momenta are expressed
// as p/mc, internal energies as E/mc^2, and times in units of hbar/mc^2
// (except where a routine is a pure scale factor and the caller's time unit
// passes through untouched).  SI values appear only at the boundaries, via
// the conversion helpers below and the experiment module.

namespace qtd {

/// Physical constants (SI).  Declared here and nowhere else.
struct Constants {
    double c;       ///< speed of light [m/s]
    double hbar;    ///< reduced Planck constant [J s]
    double m_rb87;  ///< Rb-87 atomic mass [kg]
};

constexpr Constants codata() noexcept {
    return Constants{299792458.0, 1.054571817e-34, 1.44316060e-25};
}

/// Tags a dimensionless-in-natural-units number with what it measures, so
/// that accidental mixing (momentum added to a time, say) fails loudly.
enum class Kind {
    momentum_over_mc,
    energy_over_mc2,
    time,
    dimensionless,
};

class NaturalValue {
  public:
    NaturalValue(double value, Kind kind) : value_(value), kind_(kind) {}

    double value() const noexcept { return value_; }
    Kind kind() const noexcept { return kind_; }

    // Additive arithmetic requires matching kinds; scaling by a bare double
    // is always allowed.
    NaturalValue operator+(const NaturalValue& o) const {
        require_same_kind(o);
        return {value_ + o.value_, kind_};
    }
    NaturalValue operator-(const NaturalValue& o) const {
        require_same_kind(o);
        return {value_ - o.value_, kind_};
    }
    NaturalValue operator-() const { return {-value_, kind_}; }
    NaturalValue operator*(double s) const { return {value_ * s, kind_}; }
    NaturalValue operator/(double s) const { return {value_ / s, kind_}; }

  private:
    void require_same_kind(const NaturalValue& o) const {
        if (kind_ != o.kind_)
            throw std::domain_error("NaturalValue: arithmetic between mismatched kinds");
    }

    double value_;
    Kind kind_;
};

inline NaturalValue operator*(double s, const NaturalValue& v) { return v * s; }

/// p_si / (m c).  Throws std::domain_error for non-positive mass.
NaturalValue momentum_si_to_natural(double p_si, double mass_kg);

/// Relativistic momentum of a particle moving at `v_m_per_s`, in mc units:
/// (v/c) / sqrt(1 - v^2/c^2).  Throws std::domain_error for |v| >= c.
NaturalValue velocity_to_momentum(double v_m_per_s);

/// Inverse of velocity_to_momentum: v = c p / sqrt(1 + p^2), in m/s.
double momentum_to_velocity(double p_over_mc);

}  // namespace qtd
