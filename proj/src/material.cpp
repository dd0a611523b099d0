#include "crackflutter/material.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "crackflutter/errors.hpp"
#include "crackflutter/quadrature.hpp"

namespace crackflutter::material {

namespace {

constexpr int kThicknessPoints = 20;

// Poisson ratio and density are not part of the temperature table; these are
// the values used in the FGM vibration literature for this constituent pair.
constexpr double kSiliconNitrideDensity = 2370.0;
constexpr double kSus304Density = 8166.0;
constexpr double kFgmPoisson = 0.28;

void require_finite_positive(double value, const char* what) {
    if (!std::isfinite(value) || value <= 0.0) {
        std::ostringstream msg;
        msg << what << " must be finite and positive (got " << value << ")";
        throw ArgumentError(msg.str());
    }
}

}  // namespace

double property_at(const TemperatureCoefficients& c, double temperature) {
    if (!(temperature > 0.0) || !std::isfinite(temperature)) {
        throw DomainError("property_at: temperature must be positive");
    }
    const double t = temperature;
    const double value = c.p0 * (c.p_minus1 / t + 1.0 + c.p1 * t + c.p2 * t * t + c.p3 * t * t * t);
    if (!std::isfinite(value)) {
        throw InvalidCoefficientError("property_at: non-finite property value");
    }
    return value;
}

void MaterialPhase::validate() const {
    if (!(nu > 0.0 && nu < 0.5)) {
        throw ArgumentError("phase '" + name + "': Poisson ratio must lie in (0, 0.5)");
    }
    if (!(rho > 0.0) || !std::isfinite(rho)) {
        throw ArgumentError("phase '" + name + "': density must be positive");
    }
    if (!(e_coeffs.p0 > 0.0)) {
        throw InvalidCoefficientError("phase '" + name + "': E p0 must be positive");
    }
    if (!(alpha_coeffs.p0 >= 0.0)) {
        throw InvalidCoefficientError("phase '" + name + "': alpha p0 must be non-negative");
    }
}

MaterialPhase silicon_nitride() {
    MaterialPhase p;
    p.name = "Si3N4";
    p.e_coeffs = {348.43e9, 0.0, -3.070e-4, 2.160e-7, -8.946e-11};
    p.alpha_coeffs = {5.8723e-6, 0.0, 9.095e-4, 0.0, 0.0};
    p.nu = kFgmPoisson;
    p.rho = kSiliconNitrideDensity;
    return p;
}

MaterialPhase stainless_steel_sus304() {
    MaterialPhase p;
    p.name = "SUS304";
    p.e_coeffs = {201.04e9, 0.0, 3.079e-4, -6.534e-7, 0.0};
    p.alpha_coeffs = {12.330e-6, 0.0, 8.086e-4, 0.0, 0.0};
    p.nu = kFgmPoisson;
    p.rho = kSus304Density;
    return p;
}

MaterialPhase isotropic_phase(std::string name, double youngs_modulus, double nu, double rho) {
    MaterialPhase p;
    p.name = std::move(name);
    p.e_coeffs = TemperatureCoefficients::constant(youngs_modulus);
    p.alpha_coeffs = TemperatureCoefficients::constant(0.0);
    p.nu = nu;
    p.rho = rho;
    return p;
}

void FgmPlate::validate() const {
    require_finite_positive(a, "plate length a");
    require_finite_positive(b, "plate width b");
    require_finite_positive(h, "plate thickness h");
    require_finite_positive(temperature, "temperature");
    if (!(k >= 0.0) || !std::isfinite(k)) {
        throw ArgumentError("gradient index k must be finite and >= 0");
    }
    ceramic.validate();
    metal.validate();
}

FgmPlate FgmPlate::homogeneous(double a, double b, double h, const MaterialPhase& phase,
                               double temperature) {
    FgmPlate plate;
    plate.a = a;
    plate.b = b;
    plate.h = h;
    plate.k = 0.0;
    plate.ceramic = phase;
    plate.metal = phase;
    plate.temperature = temperature;
    return plate;
}

double volume_fraction_ceramic(double z, const FgmPlate& plate) {
    const double half = 0.5 * plate.h;
    const double slack = 1e-12 * plate.h;
    if (!(z >= -half - slack && z <= half + slack)) {
        std::ostringstream msg;
        msg << "volume_fraction_ceramic: z = " << z << " outside [-h/2, h/2]";
        throw DomainError(msg.str());
    }
    const double s = std::clamp((2.0 * z + plate.h) / (2.0 * plate.h), 0.0, 1.0);
    // pow(0, 0) == 1: k = 0 is ceramic everywhere, including the bottom face.
    return std::pow(s, plate.k);
}

EffectiveProperties effective_properties(double z, const FgmPlate& plate) {
    const double vc = volume_fraction_ceramic(z, plate);
    const double vm = 1.0 - vc;
    const double ec = property_at(plate.ceramic.e_coeffs, plate.temperature);
    const double em = property_at(plate.metal.e_coeffs, plate.temperature);
    return {ec * vc + em * vm, plate.ceramic.nu * vc + plate.metal.nu * vm,
            plate.ceramic.rho * vc + plate.metal.rho * vm};
}

Eigen::Matrix3d plane_stress_stiffness(double e, double nu) {
    const double c = e / (1.0 - nu * nu);
    Eigen::Matrix3d q;
    q << c, c * nu, 0.0,
         c * nu, c, 0.0,
         0.0, 0.0, c * 0.5 * (1.0 - nu);
    return q;
}

double shear_correction(const FgmPlate& plate, ShearCorrectionMode mode) {
    if (mode == ShearCorrectionMode::Fixed) {
        return 5.0 / 6.0;
    }
    const double lo = -0.5 * plate.h;
    const double hi = 0.5 * plate.h;
    auto reduced_modulus = [&](double z) {
        const auto p = effective_properties(z, plate);
        return p.e / (1.0 - p.nu * p.nu);
    };
    auto shear_modulus = [&](double z) {
        const auto p = effective_properties(z, plate);
        return p.e / (2.0 * (1.0 + p.nu));
    };

    const double s0 = quadrature::integrate(reduced_modulus, lo, hi, kThicknessPoints);
    const double s1 = quadrature::integrate([&](double z) { return z * reduced_modulus(z); }, lo,
                                            hi, kThicknessPoints);
    const double neutral = s1 / s0;
    const double rigidity = quadrature::integrate(
        [&](double z) { return (z - neutral) * (z - neutral) * reduced_modulus(z); }, lo, hi,
        kThicknessPoints);

    // Shear stress per unit shear force: tau(z) = g(z) Q.
    auto g = [&](double z) {
        if (z <= lo) {
            return 0.0;
        }
        return quadrature::integrate(
                   [&](double s) { return (s - neutral) * reduced_modulus(s); }, lo, z,
                   kThicknessPoints) /
               rigidity;
    };
    const double shear_stiffness = quadrature::integrate(shear_modulus, lo, hi, kThicknessPoints);
    const double compliance = quadrature::integrate(
        [&](double z) {
            const double gz = g(z);
            return gz * gz / shear_modulus(z);
        },
        lo, hi, kThicknessPoints);
    return 1.0 / (shear_stiffness * compliance);
}

SectionProperties section_properties(const FgmPlate& plate, ShearCorrectionMode mode) {
    plate.validate();
    SectionProperties s;
    s.kappa = shear_correction(plate, mode);

    const auto& rule = quadrature::gauss_legendre(kThicknessPoints);
    const double half = 0.5 * plate.h;
    double shear_modulus_integral = 0.0;
    for (std::size_t i = 0; i < rule.points.size(); ++i) {
        const double z = half * rule.points[i];
        const double w = half * rule.weights[i];
        const auto p = effective_properties(z, plate);
        const Eigen::Matrix3d q = plane_stress_stiffness(p.e, p.nu);
        s.a += w * q;
        s.b += (w * z) * q;
        s.db += (w * z * z) * q;
        shear_modulus_integral += w * p.e / (2.0 * (1.0 + p.nu));
        s.i0 += w * p.rho;
        s.i1 += w * z * z * p.rho;
    }
    s.es = s.kappa * shear_modulus_integral * Eigen::Matrix2d::Identity();
    if (!s.a.allFinite() || !s.db.allFinite() || !std::isfinite(s.i0)) {
        throw Error("section_properties: through-thickness integration failed");
    }
    return s;
}

double ceramic_bending_rigidity(const FgmPlate& plate) {
    const double ec = property_at(plate.ceramic.e_coeffs, plate.temperature);
    const double nu = plate.ceramic.nu;
    return ec * plate.h * plate.h * plate.h / (12.0 * (1.0 - nu * nu));
}

double ceramic_density(const FgmPlate& plate) { return plate.ceramic.rho; }

}  // namespace crackflutter::material
