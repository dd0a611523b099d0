#pragma once

#include <string>

#include <Eigen/Core>

namespace crackflutter::material {

/// Coefficients of P(T) = p0 (p_minus1/T + 1 + p1 T + p2 T^2 + p3 T^3).
struct TemperatureCoefficients {
    double p0 = 0.0;
    double p_minus1 = 0.0;
    double p1 = 0.0;
    double p2 = 0.0;
    double p3 = 0.0;

    static TemperatureCoefficients constant(double value) { return {value, 0.0, 0.0, 0.0, 0.0}; }
};

/// Evaluates a temperature dependent property at T kelvin.
double property_at(const TemperatureCoefficients& coeffs, double temperature);

struct MaterialPhase {
    std::string name;
    TemperatureCoefficients e_coeffs;      // Pa
    TemperatureCoefficients alpha_coeffs;  // 1/K, stored but no thermal load uses it
    double nu = 0.3;
    double rho = 1.0;  // kg/m^3

    void validate() const;
};

/// Silicon nitride with the Reddy/Sundararajan coefficient set.
MaterialPhase silicon_nitride();
/// Stainless steel SUS304 with the Reddy/Sundararajan coefficient set.
MaterialPhase stainless_steel_sus304();
/// Temperature independent phase.
MaterialPhase isotropic_phase(std::string name, double youngs_modulus, double nu, double rho);

/// Ceramic (top, z = +h/2) to metal (bottom, z = -h/2) power-law graded plate.
struct FgmPlate {
    double a = 1.0;
    double b = 1.0;
    double h = 0.01;
    double k = 0.0;  // gradient index
    MaterialPhase ceramic;
    MaterialPhase metal;
    double temperature = 300.0;

    void validate() const;
    /// Homogeneous plate of a single phase (k = 0, both slots hold the same phase).
    static FgmPlate homogeneous(double a, double b, double h, const MaterialPhase& phase,
                                double temperature = 300.0);
};

struct EffectiveProperties {
    double e = 0.0;
    double nu = 0.0;
    double rho = 0.0;
};

enum class ShearCorrectionMode { Fixed, EnergyEquivalence };

struct SectionProperties {
    Eigen::Matrix3d a = Eigen::Matrix3d::Zero();   // N/m
    Eigen::Matrix3d b = Eigen::Matrix3d::Zero();   // N
    Eigen::Matrix3d db = Eigen::Matrix3d::Zero();  // N m
    Eigen::Matrix2d es = Eigen::Matrix2d::Zero();  // N/m
    double i0 = 0.0;                               // kg/m^2
    double i1 = 0.0;                               // kg
    double kappa = 5.0 / 6.0;
};

double volume_fraction_ceramic(double z, const FgmPlate& plate);
EffectiveProperties effective_properties(double z, const FgmPlate& plate);

/// Transverse shear correction factor. Fixed mode returns 5/6; energy mode
/// equates the FSDT shear energy with that of the equilibrium shear stress
/// distribution through the graded section.
double shear_correction(const FgmPlate& plate,
                        ShearCorrectionMode mode = ShearCorrectionMode::Fixed);

SectionProperties section_properties(const FgmPlate& plate,
                                     ShearCorrectionMode mode = ShearCorrectionMode::Fixed);

/// Plane stress reduced stiffness for an isotropic point.
Eigen::Matrix3d plane_stress_stiffness(double e, double nu);

/// Bending rigidity E h^3 / (12 (1 - nu^2)) of the ceramic phase.
double ceramic_bending_rigidity(const FgmPlate& plate);
double ceramic_density(const FgmPlate& plate);

}  // namespace crackflutter::material
