#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ldg/qtensor.hpp"

namespace ldg {

/// Cell-centered cubic lattice over the cube [center - hw, center + hw]^3.
/// Node (i,j,k) sits at center + h*(i + 1/2 - n/2) per axis, h = 2*hw/n.
struct GridSpec {
    Vec3 center{};
    double half_width = 1.0;
    int n_cells = 8;

    double spacing() const { return 2.0 * half_width / n_cells; }

    void validate() const {
        if (n_cells < 8) throw std::invalid_argument("GridSpec: n_cells must be >= 8");
        if (!(half_width > 0.0)) throw std::invalid_argument("GridSpec: half_width must be positive");
    }

    double coord(int i) const { return half_width * (2.0 * i + 1.0 - n_cells) / n_cells; }

    Vec3 node_position(int i, int j, int k) const {
        return {center.x + coord(i), center.y + coord(j), center.z + coord(k)};
    }

    std::size_t index(int i, int j, int k) const {
        return (static_cast<std::size_t>(i) * n_cells + j) * n_cells + k;
    }

    std::size_t node_count() const {
        return static_cast<std::size_t>(n_cells) * n_cells * n_cells;
    }

    /// Half-extent of the node hull (the region where interpolation is defined).
    double hull_half_width() const { return half_width - 0.5 * spacing(); }

    bool in_hull(const Vec3& x, double slack = 1e-12) const {
        const double b = hull_half_width() + slack;
        return std::abs(x.x - center.x) <= b && std::abs(x.y - center.y) <= b &&
               std::abs(x.z - center.z) <= b;
    }
};

/// Q-tensor lattice with a Dirichlet mask. Values at masked nodes are
/// boundary data and are never touched by the solver.
struct QField {
    GridSpec grid;
    std::vector<QTensor> values;
    std::vector<std::uint8_t> dirichlet;

    const QTensor& at(int i, int j, int k) const { return values[grid.index(i, j, k)]; }
    QTensor& at(int i, int j, int k) { return values[grid.index(i, j, k)]; }
    bool is_dirichlet(int i, int j, int k) const { return dirichlet[grid.index(i, j, k)] != 0; }

    /// Additionally mark every node with |x - grid.center| >= radius as
    /// Dirichlet (ball domains on the cubic lattice).
    void mask_outside_ball(double radius) {
        const int n = grid.n_cells;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) {
                    const Vec3 x = grid.node_position(i, j, k) - grid.center;
                    if (norm(x) >= radius) dirichlet[grid.index(i, j, k)] = 1;
                }
    }
};

/// Evaluate f at every node; the outermost node layer is marked Dirichlet.
inline QField sample(const GridSpec& grid, const std::function<QTensor(const Vec3&)>& f) {
    grid.validate();
    QField field;
    field.grid = grid;
    const int n = grid.n_cells;
    field.values.resize(grid.node_count());
    field.dirichlet.assign(grid.node_count(), 0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                const std::size_t idx = grid.index(i, j, k);
                field.values[idx] = f(grid.node_position(i, j, k));
                if (i == 0 || i == n - 1 || j == 0 || j == n - 1 || k == 0 || k == n - 1)
                    field.dirichlet[idx] = 1;
            }
    return field;
}

/// The hedgehog map s+ (x/|x| (x) x/|x| - Id/3), regularized to 0 at x = 0.
inline QTensor hedgehog_field(const Vec3& x, double s_plus) {
    const double r = norm(x);
    if (r == 0.0) return QTensor{};
    return uniaxial(x / r, s_plus);
}

/// Trilinear interpolation of the five coefficients. x must lie inside the
/// node hull.
inline QTensor interpolate(const QField& field, const Vec3& x) {
    const GridSpec& g = field.grid;
    if (!g.in_hull(x))
        throw std::runtime_error("interpolate: position outside node hull");
    const int n = g.n_cells;
    const double h = g.spacing();
    double t[3], w[3];
    int i0[3];
    const Vec3 rel = x - g.center;
    for (int d = 0; d < 3; ++d) {
        t[d] = (rel[d] - g.coord(0)) / h;
        i0[d] = static_cast<int>(std::floor(t[d]));
        if (i0[d] < 0) i0[d] = 0;
        if (i0[d] > n - 2) i0[d] = n - 2;
        w[d] = t[d] - i0[d];
    }
    QTensor out;
    for (int dx = 0; dx < 2; ++dx)
        for (int dy = 0; dy < 2; ++dy)
            for (int dz = 0; dz < 2; ++dz) {
                const double ww = (dx ? w[0] : 1.0 - w[0]) * (dy ? w[1] : 1.0 - w[1]) *
                                  (dz ? w[2] : 1.0 - w[2]);
                if (ww == 0.0) continue;
                out += ww * field.values[g.index(i0[0] + dx, i0[1] + dy, i0[2] + dz)];
            }
    return out;
}

/// Rescaled extraction y -> field(center + scale * y) onto a target grid.
struct BlowupSpec {
    Vec3 center{};      // x_n in source coordinates
    double scale = 1.0; // eps of the blow-up
    GridSpec target;    // grid in blow-up coordinates
};

inline QField extract_blowup(const QField& field, const BlowupSpec& spec) {
    spec.target.validate();
    const double b = spec.target.hull_half_width();
    for (int cx = -1; cx <= 1; cx += 2)
        for (int cy = -1; cy <= 1; cy += 2)
            for (int cz = -1; cz <= 1; cz += 2) {
                const Vec3 corner = spec.target.center + Vec3{cx * b, cy * b, cz * b};
                const Vec3 mapped = spec.center + spec.scale * corner;
                if (!field.grid.in_hull(mapped)) {
                    std::ostringstream os;
                    os << "extract_blowup: target corner " << corner << " maps to " << mapped
                       << " outside the source hull";
                    throw std::runtime_error(os.str());
                }
            }
    QField out;
    out.grid = spec.target;
    const int n = spec.target.n_cells;
    out.values.resize(spec.target.node_count());
    out.dirichlet.assign(spec.target.node_count(), 0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                const Vec3 y = spec.target.node_position(i, j, k);
                out.values[spec.target.index(i, j, k)] =
                    interpolate(field, spec.center + spec.scale * y);
                if (i == 0 || i == n - 1 || j == 0 || j == n - 1 || k == 0 || k == n - 1)
                    out.dirichlet[spec.target.index(i, j, k)] = 1;
            }
    return out;
}

// ---------------------------------------------------------------------------
// Snapshot files. CSV schema: i,j,k,x,y,z,q1,q2,q3,q4,q5 with k fastest.
// ---------------------------------------------------------------------------

inline void write_snapshot_csv(const QField& field, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("write_snapshot_csv: cannot open " + path);
    const GridSpec& g = field.grid;
    os.precision(17);
    os << "# q-tensor lattice snapshot\n";
    os << "# basis: E0=diag(-1,-1,2)/sqrt6 E1=diag(1,-1,0)/sqrt2 E2=sym(xy)/sqrt2 "
          "E3=sym(xz)/sqrt2 E4=sym(yz)/sqrt2; Q = sum q_c E_c\n";
    os << "# n_cells=" << g.n_cells << " half_width=" << g.half_width << " center=" << g.center.x
       << "," << g.center.y << "," << g.center.z << "\n";
    os << "i,j,k,x,y,z,q1,q2,q3,q4,q5\n";
    for (int i = 0; i < g.n_cells; ++i)
        for (int j = 0; j < g.n_cells; ++j)
            for (int k = 0; k < g.n_cells; ++k) {
                const Vec3 x = g.node_position(i, j, k);
                const QTensor& q = field.values[g.index(i, j, k)];
                os << i << ',' << j << ',' << k << ',' << x.x << ',' << x.y << ',' << x.z;
                for (int c = 0; c < 5; ++c) os << ',' << q[c];
                os << '\n';
            }
    if (!os) throw std::runtime_error("write_snapshot_csv: write failed for " + path);
}

inline QField read_snapshot_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("read_snapshot_csv: cannot open " + path);
    GridSpec g;
    bool have_grid = false;
    std::string line;
    QField field;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto npos = line.find("n_cells=");
            if (npos != std::string::npos) {
                std::sscanf(line.c_str() + npos,
                            "n_cells=%d half_width=%lf center=%lf,%lf,%lf", &g.n_cells,
                            &g.half_width, &g.center.x, &g.center.y, &g.center.z);
                have_grid = true;
            }
            continue;
        }
        if (line.rfind("i,j,k", 0) == 0) continue;  // column header
        if (!have_grid) throw std::runtime_error("read_snapshot_csv: missing grid header line");
        if (field.values.empty()) {
            g.validate();
            field.grid = g;
            field.values.resize(g.node_count());
            field.dirichlet.assign(g.node_count(), 0);
        }
        int i, j, k;
        double x, y, z, q[5];
        if (std::sscanf(line.c_str(), "%d,%d,%d,%lf,%lf,%lf,%lf,%lf,%lf,%lf,%lf", &i, &j, &k, &x,
                        &y, &z, &q[0], &q[1], &q[2], &q[3], &q[4]) != 11)
            throw std::runtime_error("read_snapshot_csv: malformed row: " + line);
        if (i < 0 || i >= g.n_cells || j < 0 || j >= g.n_cells || k < 0 || k >= g.n_cells)
            throw std::runtime_error("read_snapshot_csv: node index out of range: " + line);
        field.values[g.index(i, j, k)] = QTensor::from_coeffs(q[0], q[1], q[2], q[3], q[4]);
        const int n = g.n_cells;
        if (i == 0 || i == n - 1 || j == 0 || j == n - 1 || k == 0 || k == n - 1)
            field.dirichlet[g.index(i, j, k)] = 1;
    }
    if (field.values.empty()) throw std::runtime_error("read_snapshot_csv: no data rows in " + path);
    return field;
}

inline void write_snapshot_binary(const QField& field, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("write_snapshot_binary: cannot open " + path);
    const char magic[8] = {'L', 'D', 'G', 'Q', 'F', 'L', 'D', '1'};
    os.write(magic, 8);
    const GridSpec& g = field.grid;
    std::int64_t n = g.n_cells;
    os.write(reinterpret_cast<const char*>(&n), sizeof n);
    os.write(reinterpret_cast<const char*>(&g.half_width), sizeof(double));
    os.write(reinterpret_cast<const char*>(&g.center), sizeof(Vec3));
    os.write(reinterpret_cast<const char*>(field.values.data()),
             static_cast<std::streamsize>(field.values.size() * sizeof(QTensor)));
    os.write(reinterpret_cast<const char*>(field.dirichlet.data()),
             static_cast<std::streamsize>(field.dirichlet.size()));
    if (!os) throw std::runtime_error("write_snapshot_binary: write failed for " + path);
}

inline QField read_snapshot_binary(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("read_snapshot_binary: cannot open " + path);
    char magic[8];
    is.read(magic, 8);
    if (std::string(magic, 8) != "LDGQFLD1")
        throw std::runtime_error("read_snapshot_binary: bad magic in " + path);
    QField field;
    std::int64_t n = 0;
    is.read(reinterpret_cast<char*>(&n), sizeof n);
    is.read(reinterpret_cast<char*>(&field.grid.half_width), sizeof(double));
    is.read(reinterpret_cast<char*>(&field.grid.center), sizeof(Vec3));
    field.grid.n_cells = static_cast<int>(n);
    field.grid.validate();
    field.values.resize(field.grid.node_count());
    field.dirichlet.resize(field.grid.node_count());
    is.read(reinterpret_cast<char*>(field.values.data()),
            static_cast<std::streamsize>(field.values.size() * sizeof(QTensor)));
    is.read(reinterpret_cast<char*>(field.dirichlet.data()),
            static_cast<std::streamsize>(field.dirichlet.size()));
    if (!is) throw std::runtime_error("read_snapshot_binary: truncated file " + path);
    return field;
}

}  // namespace ldg
