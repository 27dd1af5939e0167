#include "qset/substrate.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "qset/errors.hpp"
#include "qset/units.hpp"

namespace qset {

namespace {

using constants::pi;

// Kirchhoff potentials and their inverses for the two power laws.
struct Materials {
    double c_ox = 0.0;
    double c_si = 0.0;

    double phi_ox(double t) const { return c_ox * t * t * t / 3.0; }
    double phi_si(double t) const { return c_si * t * t * t * t / 4.0; }
    double t_ox(double phi) const { return std::cbrt(3.0 * std::max(phi, 0.0) / c_ox); }
    double t_si(double phi) const { return std::pow(4.0 * std::max(phi, 0.0) / c_si, 0.25); }
    double kappa_ox(double t) const { return c_ox * t * t; }
    double kappa_si(double t) const { return c_si * t * t * t; }
};

std::vector<double> graded_faces(double uniform_end, int uniform_cells, double first_graded,
                                 double end, double growth) {
    std::vector<double> faces;
    const double h = uniform_end / uniform_cells;
    for (int k = 0; k <= uniform_cells; ++k) faces.push_back(h * k);
    faces.back() = uniform_end;
    std::vector<double> sizes;
    double total = 0.0;
    double size = first_graded;
    while (total < end - uniform_end) {
        sizes.push_back(size);
        total += size;
        size *= growth;
    }
    const double scale = (end - uniform_end) / total;
    double pos = uniform_end;
    for (double s : sizes) {
        pos += s * scale;
        faces.push_back(pos);
    }
    faces.back() = end;
    return faces;
}

struct Grid {
    std::vector<double> rf, zf, rc, zc;
    std::size_t nr = 0, nz = 0, ox = 0, src = 0;
    Materials mat;

    std::size_t idx(std::size_t i, std::size_t j) const { return j * nr + i; }
    bool oxide(std::size_t j) const { return j < ox; }
    double dz(std::size_t j) const { return zf[j + 1] - zf[j]; }
    double ring_area(std::size_t i) const { return pi * (rf[i + 1] * rf[i + 1] - rf[i] * rf[i]); }

    // Conductance of the radial link between centres i and i+1 (or the outer
    // boundary when i + 1 == nr), per unit Kirchhoff potential.
    double radial_g(std::size_t i, std::size_t j) const {
        const double outer = i + 1 < nr ? rc[i + 1] : rf[nr];
        return 2.0 * pi * dz(j) / std::log(outer / rc[i]);
    }
    double vertical_g(std::size_t i, std::size_t j) const {
        return ring_area(i) / (0.5 * (dz(j) + dz(j + 1)));
    }
    double bottom_g(std::size_t i) const { return ring_area(i) / (0.5 * dz(nz - 1)); }

    double phi(std::size_t j, double t) const { return oxide(j) ? mat.phi_ox(t) : mat.phi_si(t); }
    double temp(std::size_t j, double u) const { return oxide(j) ? mat.t_ox(u) : mat.t_si(u); }
};

struct InterfaceFlux {
    double flux = 0.0;   // W, oxide -> silicon
    double d_ox = 0.0;   // dF / d u_ox
    double d_si = 0.0;   // dF / d u_si
};

// Flux through an SiO2/Si face with half-cell conductances a (oxide side) and
// b (silicon side); the face temperature satisfies continuity of flux.
InterfaceFlux interface_flux(const Materials& m, double u_ox, double u_si, double a, double b) {
    const double t_ox = m.t_ox(u_ox);
    const double t_si = m.t_si(u_si);
    double lo = std::min(t_ox, t_si);
    double hi = std::max(t_ox, t_si);
    const auto g = [&](double t) { return a * (u_ox - m.phi_ox(t)) - b * (m.phi_si(t) - u_si); };
    double t_f = 0.5 * (lo + hi);
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double val = g(t_f);
        if (val > 0.0) lo = t_f; else hi = t_f;
        const double slope = -(a * m.kappa_ox(t_f) + b * m.kappa_si(t_f));
        double next = slope < 0.0 ? t_f - val / slope : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (next == t_f) break;
        t_f = next;
    }
    InterfaceFlux out;
    out.flux = a * (u_ox - m.phi_ox(t_f));
    const double ka = a * m.kappa_ox(t_f);
    const double kb = b * m.kappa_si(t_f);
    const double denom = ka + kb;
    if (denom > 0.0) {
        out.d_ox = a * kb / denom;
        out.d_si = -a * ka / denom;
    } else {
        out.d_ox = a * b / (a + b);
        out.d_si = -out.d_ox;
    }
    return out;
}

Grid build_grid(const SubstrateModel& m) {
    Grid g;
    const double a = m.source_radius();
    g.rf = graded_faces(a, m.cells_source_radius, a / m.cells_source_radius, m.domain_radius, m.growth);
    const double d = m.sio2_thickness;
    g.zf = graded_faces(d, m.cells_oxide, d / m.cells_oxide, d + m.si_depth, m.growth);
    g.nr = g.rf.size() - 1;
    g.nz = g.zf.size() - 1;
    g.ox = static_cast<std::size_t>(m.cells_oxide);
    g.src = static_cast<std::size_t>(m.cells_source_radius);
    for (std::size_t i = 0; i < g.nr; ++i) g.rc.push_back(0.5 * (g.rf[i] + g.rf[i + 1]));
    for (std::size_t j = 0; j < g.nz; ++j) g.zc.push_back(0.5 * (g.zf[j] + g.zf[j + 1]));
    g.mat = {m.kappa_sio2_coeff, m.kappa_si_coeff};
    return g;
}

Grid grid_from_field(const SubstrateField& f) {
    Grid g;
    g.rf = f.r_faces;
    g.zf = f.z_faces;
    g.rc = f.r;
    g.zc = f.z;
    g.nr = f.nr;
    g.nz = f.nz;
    g.ox = f.oxide_rows;
    g.mat = {f.kappa_sio2_coeff, f.kappa_si_coeff};
    return g;
}

// Heat flow from cell (i, j) into the cell below it (or the bottom bath).
double vertical_flux(const Grid& g, const std::vector<double>& u, std::size_t i, std::size_t j,
                     double t_b) {
    if (j + 1 == g.nz) return g.bottom_g(i) * (u[g.idx(i, j)] - g.phi(j, t_b));
    if (g.oxide(j) && !g.oxide(j + 1)) {
        const double area = g.ring_area(i);
        return interface_flux(g.mat, u[g.idx(i, j)], u[g.idx(i, j + 1)], area / (0.5 * g.dz(j)),
                              area / (0.5 * g.dz(j + 1)))
            .flux;
    }
    return g.vertical_g(i, j) * (u[g.idx(i, j)] - u[g.idx(i, j + 1)]);
}

double radial_flux(const Grid& g, const std::vector<double>& u, std::size_t i, std::size_t j,
                   double t_b) {
    const double neighbour = i + 1 < g.nr ? u[g.idx(i + 1, j)] : g.phi(j, t_b);
    return g.radial_g(i, j) * (u[g.idx(i, j)] - neighbour);
}

}  // namespace

void SubstrateModel::validate() const {
    const auto positive = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw InvalidParameter(std::string(name) + " must be strictly positive");
        }
    };
    positive(sio2_thickness, "sio2_thickness");
    positive(si_depth, "si_depth");
    positive(domain_radius, "domain_radius");
    positive(kappa_si_coeff, "kappa_si_coeff");
    positive(kappa_sio2_coeff, "kappa_sio2_coeff");
    positive(source_area, "source_area");
    if (cells_source_radius < 3 || cells_oxide < 3) {
        throw InvalidParameter("substrate grid needs at least 3 cells under the source and in the film");
    }
    if (!(growth >= 1.0 && growth <= 2.0)) throw InvalidParameter("grid growth must lie in [1, 2]");
    if (!(source_radius() < domain_radius)) {
        throw InvalidParameter("source footprint must be smaller than the domain");
    }
    if (max_iterations < 1) throw InvalidParameter("max_iterations must be >= 1");
}

double SubstrateModel::source_radius() const { return std::sqrt(source_area / pi); }

SubstrateModel SubstrateModel::refined() const {
    SubstrateModel m = *this;
    m.cells_source_radius *= 2;
    m.cells_oxide *= 2;
    m.growth = std::sqrt(growth);
    return m;
}

double SubstrateField::contour_flux(std::size_t ir, std::size_t jz) const {
    if (ir == 0 || jz == 0 || ir > nr || jz > nz) {
        throw InvalidParameter("contour must enclose at least one cell and stay inside the grid");
    }
    const Grid g = grid_from_field(*this);
    std::vector<double> u(temperature.size());
    for (std::size_t j = 0; j < nz; ++j) {
        for (std::size_t i = 0; i < nr; ++i) u[g.idx(i, j)] = g.phi(j, at(i, j));
    }
    double out = 0.0;
    for (std::size_t j = 0; j < jz; ++j) out += radial_flux(g, u, ir - 1, j, t_boundary);
    for (std::size_t i = 0; i < ir; ++i) out += vertical_flux(g, u, i, jz - 1, t_boundary);
    return out;
}

SubstrateField substrate_temperature_field(double power, double t_boundary, const SubstrateModel& m,
                                           const SubstrateOptions& options) {
    m.validate();
    if (!(power >= 0.0) || !std::isfinite(power)) throw InvalidParameter("power must be non-negative");
    if (!(t_boundary > 0.0) || !std::isfinite(t_boundary)) {
        throw InvalidParameter("boundary temperature must be strictly positive");
    }

    const Grid g = build_grid(m);
    const std::size_t n = g.nr * g.nz;
    const double a = m.source_radius();
    const double q = power / (pi * a * a);

    std::vector<double> u(n);
    for (std::size_t j = 0; j < g.nz; ++j) {
        for (std::size_t i = 0; i < g.nr; ++i) u[g.idx(i, j)] = g.phi(j, t_boundary);
    }

    std::vector<double> source(n, 0.0);
    for (std::size_t i = 0; i < g.src; ++i) source[g.idx(i, 0)] = q * g.ring_area(i);

    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    bool analyzed = false;
    int it = 0;
    double step_norm = 0.0;
    for (; it < m.max_iterations; ++it) {
        std::vector<Eigen::Triplet<double>> trip;
        trip.reserve(5 * n);
        Eigen::VectorXd residual = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
        const auto add_link = [&](std::size_t c, std::size_t nb, double flux, double d_c, double d_nb) {
            residual[static_cast<Eigen::Index>(c)] += flux;
            residual[static_cast<Eigen::Index>(nb)] -= flux;
            trip.emplace_back(c, c, d_c);
            trip.emplace_back(c, nb, d_nb);
            trip.emplace_back(nb, c, -d_c);
            trip.emplace_back(nb, nb, -d_nb);
        };
        for (std::size_t j = 0; j < g.nz; ++j) {
            for (std::size_t i = 0; i < g.nr; ++i) {
                const std::size_t c = g.idx(i, j);
                residual[static_cast<Eigen::Index>(c)] -= source[c];
                // Radial link / outer Dirichlet face.
                const double gr = g.radial_g(i, j);
                if (i + 1 < g.nr) {
                    add_link(c, g.idx(i + 1, j), gr * (u[c] - u[g.idx(i + 1, j)]), gr, -gr);
                } else {
                    residual[static_cast<Eigen::Index>(c)] += gr * (u[c] - g.phi(j, t_boundary));
                    trip.emplace_back(c, c, gr);
                }
                // Vertical link / bottom Dirichlet face.
                if (j + 1 == g.nz) {
                    const double gb = g.bottom_g(i);
                    residual[static_cast<Eigen::Index>(c)] += gb * (u[c] - g.phi(j, t_boundary));
                    trip.emplace_back(c, c, gb);
                } else if (g.oxide(j) && !g.oxide(j + 1)) {
                    const double area = g.ring_area(i);
                    const auto f = interface_flux(g.mat, u[c], u[g.idx(i, j + 1)], area / (0.5 * g.dz(j)),
                                                  area / (0.5 * g.dz(j + 1)));
                    add_link(c, g.idx(i, j + 1), f.flux, f.d_ox, f.d_si);
                } else {
                    const double gv = g.vertical_g(i, j);
                    add_link(c, g.idx(i, j + 1), gv * (u[c] - u[g.idx(i, j + 1)]), gv, -gv);
                }
            }
        }
        Eigen::SparseMatrix<double> jac(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
        jac.setFromTriplets(trip.begin(), trip.end());
        jac.makeCompressed();
        if (!analyzed) {
            lu.analyzePattern(jac);
            analyzed = true;
        }
        lu.factorize(jac);
        if (lu.info() != Eigen::Success) {
            throw NumericalError("substrate Jacobian factorization failed: " + lu.lastErrorMessage());
        }
        const Eigen::VectorXd step = lu.solve(-residual);
        double u_scale = 0.0;
        for (double v : u) u_scale = std::max(u_scale, std::abs(v));
        step_norm = step.cwiseAbs().maxCoeff() / u_scale;

        // Keep Kirchhoff potentials non-negative.
        double alpha = 1.0;
        for (std::size_t c = 0; c < n; ++c) {
            const double s = step[static_cast<Eigen::Index>(c)];
            if (u[c] + alpha * s < 0.0) alpha = std::min(alpha, 0.5 * u[c] / -s);
        }
        for (std::size_t c = 0; c < n; ++c) u[c] += alpha * step[static_cast<Eigen::Index>(c)];
        if (alpha == 1.0 && step_norm < m.rel_tol) {
            ++it;
            break;
        }
    }
    if (!(step_norm < m.rel_tol)) {
        std::ostringstream msg;
        msg << "substrate Newton iteration did not converge in " << m.max_iterations
            << " iterations (last relative step " << step_norm << ")";
        throw NumericalError(msg.str());
    }

    SubstrateField f;
    f.r_faces = g.rf;
    f.z_faces = g.zf;
    f.r = g.rc;
    f.z = g.zc;
    f.nr = g.nr;
    f.nz = g.nz;
    f.oxide_rows = g.ox;
    f.power = power;
    f.t_boundary = t_boundary;
    f.iterations = it;
    f.kappa_si_coeff = m.kappa_si_coeff;
    f.kappa_sio2_coeff = m.kappa_sio2_coeff;
    f.temperature.resize(n);
    for (std::size_t j = 0; j < g.nz; ++j) {
        for (std::size_t i = 0; i < g.nr; ++i) f.temperature[g.idx(i, j)] = g.temp(j, u[g.idx(i, j)]);
    }

    // Surface temperature: half a film cell of conduction above the centre.
    double weighted = 0.0;
    double area = 0.0;
    for (std::size_t i = 0; i < g.src; ++i) {
        const double surface = g.mat.t_ox(u[g.idx(i, 0)] + q * 0.5 * g.dz(0));
        weighted += surface * g.ring_area(i);
        area += g.ring_area(i);
    }
    f.t_at_source = weighted / area;

    double out = 0.0;
    for (std::size_t j = 0; j < g.nz; ++j) out += radial_flux(g, u, g.nr - 1, j, t_boundary);
    for (std::size_t i = 0; i < g.nr; ++i) out += vertical_flux(g, u, i, g.nz - 1, t_boundary);
    f.boundary_flux = out;

    if (options.check_refinement) {
        const auto fine = substrate_temperature_field(power, t_boundary, m.refined(), {});
        const double change = std::abs(fine.t_at_source - f.t_at_source) / f.t_at_source;
        if (change > options.refinement_tol) {
            std::ostringstream msg;
            msg << "substrate grid is under-resolved: source temperature changes by " << change * 100.0
                << "% on 2x refinement";
            throw NumericalError(msg.str());
        }
    }
    return f;
}

}  // namespace qset
