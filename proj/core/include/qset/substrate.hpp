#pragma once

// Steady heat spreading from the SET footprint into an SiO2 film on Si.
//
// Axisymmetric (r, z) finite-volume model, z pointing down from the film
// surface. A uniform flux disk of the SET footprint heats the top surface,
// the rest of the top surface is adiabatic, and the outer cylinder and bottom
// face are held at the boundary temperature. Conductivities follow power laws
// kappa_SiO2 = c_ox T^2 and kappa_Si = c_si T^3; inside each layer the
// Kirchhoff potential phi = integral of kappa dT satisfies a linear equation,
// and the layers are joined by flux and temperature continuity.

#include <cstddef>
#include <vector>

namespace qset {

struct SubstrateModel {
    double sio2_thickness = 500e-9;    // m
    double si_depth = 50e-6;           // m
    double domain_radius = 50e-6;      // m
    double kappa_si_coeff = 5.0;       // W K^-4 m^-1, kappa = c T^3
    double kappa_sio2_coeff = 0.03;    // W K^-3 m^-1, kappa = c T^2
    double source_area = 1.5e-6 * 0.3e-6;  // m^2, island footprint

    // Grid: uniform cells under the source and across the film, geometric
    // growth by `growth` towards the far boundaries.
    int cells_source_radius = 8;
    int cells_oxide = 6;
    double growth = 1.1;

    int max_iterations = 100;
    double rel_tol = 1e-10;  // Newton step relative to the largest potential

    void validate() const;

    double source_radius() const;

    // The same geometry with every cell size halved.
    SubstrateModel refined() const;
};

struct SubstrateField {
    std::vector<double> r_faces;  // m, size nr + 1
    std::vector<double> z_faces;  // m, size nz + 1
    std::vector<double> r;        // cell centres, m
    std::vector<double> z;
    std::vector<double> temperature;  // K, row-major in z: index = j * nr + i
    std::size_t nr = 0;
    std::size_t nz = 0;
    std::size_t oxide_rows = 0;

    double power = 0.0;             // W injected
    double t_boundary = 0.0;        // K
    double t_at_source = 0.0;       // area-averaged surface temperature under the source, K
    double boundary_flux = 0.0;     // W leaving through the Dirichlet faces
    int iterations = 0;

    double at(std::size_t i, std::size_t j) const { return temperature[j * nr + i]; }

    // Net heat (W) leaving the block of cells i < ir, j < jz through its
    // boundary. Equals the injected power for any block that contains the
    // source (ir >= source cells), and is the discrete conservation check.
    double contour_flux(std::size_t ir, std::size_t jz) const;

    // Physical model kept for flux evaluation.
    double kappa_si_coeff = 0.0;
    double kappa_sio2_coeff = 0.0;
};

struct SubstrateOptions {
    // Re-solve on a grid refined 2x and fail if t_at_source moves by more
    // than `refinement_tol` relative.
    bool check_refinement = false;
    double refinement_tol = 0.02;
};

SubstrateField substrate_temperature_field(double power, double t_boundary, const SubstrateModel& m,
                                           const SubstrateOptions& options = {});

}  // namespace qset
