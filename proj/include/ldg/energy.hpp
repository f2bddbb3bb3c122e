#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "ldg/field.hpp"
#include "ldg/material.hpp"

namespace ldg {

/// Integration region for energy sums: the whole lattice or a ball about the
/// grid center (membership by node-center inclusion). The ball variant can
/// exclude the single cell containing the center, which removes the
/// regularized hedgehog core from comparisons against the analytic value.
struct Region {
    enum class Kind { whole_domain, ball };
    Kind kind = Kind::whole_domain;
    double radius = 0.0;
    bool exclude_center_cell = false;

    static Region whole() { return {}; }
    static Region ball(double r, bool exclude_center = false) {
        Region reg;
        reg.kind = Kind::ball;
        reg.radius = r;
        reg.exclude_center_cell = exclude_center;
        return reg;
    }
};

struct EnergyBreakdown {
    double elastic = 0.0;
    double bulk = 0.0;
    double total = 0.0;
};

namespace detail {

/// Ordered block-pairwise accumulator: bit-stable results independent of how
/// callers chunk their loops, and better roundoff than naive summation.
class PairwiseSum {
  public:
    void add(double v) {
        block_ += v;
        if (++count_ == block_size) {
            partials_.push_back(block_);
            block_ = 0.0;
            count_ = 0;
        }
    }
    double value() const {
        std::vector<double> p = partials_;
        if (count_ > 0) p.push_back(block_);
        if (p.empty()) return 0.0;
        while (p.size() > 1) {
            std::size_t half = (p.size() + 1) / 2;
            for (std::size_t i = 0; i + half < p.size(); ++i) p[i] += p[i + half];
            p.resize(half);
        }
        return p[0];
    }

  private:
    static constexpr int block_size = 4096;
    std::vector<double> partials_;
    double block_ = 0.0;
    int count_ = 0;
};

/// Index of the node whose cell contains the grid center (per axis).
inline int center_cell_index(const GridSpec& g) { return g.n_cells / 2; }

}  // namespace detail

/// Discrete Landau-de Gennes energy over a region: forward-difference edge
/// gradients (three outgoing edges per node, h^3 weight) plus f_b/eps^2 at
/// nodes. With exclude_center_cell, the excluded node contributes no bulk
/// term and no edge incident to it is counted.
inline EnergyBreakdown total_energy(const QField& field, const MaterialParams& p,
                                    const Region& region = Region::whole()) {
    const GridSpec& g = field.grid;
    const int n = g.n_cells;
    const double h = g.spacing();
    if (region.kind == Region::Kind::ball) {
        if (!(region.radius > h))
            throw std::invalid_argument("total_energy: ball radius must exceed the grid spacing");
        if (region.radius > g.half_width + 1e-12)
            throw std::invalid_argument("total_energy: ball radius exceeds the domain half width");
    }
    const int ic = detail::center_cell_index(g);
    const double r2max = region.radius * region.radius;
    const double inv_eps2 = 1.0 / (p.eps * p.eps);
    const double h3 = h * h * h;

    detail::PairwiseSum elastic, bulk;
    const std::size_t stride_i = static_cast<std::size_t>(n) * n;
    const std::size_t stride_j = n;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                const bool excluded = region.exclude_center_cell && i == ic && j == ic && k == ic;
                if (region.kind == Region::Kind::ball) {
                    const Vec3 x = g.node_position(i, j, k) - g.center;
                    if (norm2(x) > r2max) continue;
                }
                const std::size_t idx = g.index(i, j, k);
                if (!excluded) bulk.add(bulk_energy(field.values[idx], p) * inv_eps2 * h3);
                const QTensor& q = field.values[idx];
                const std::size_t nbr[3] = {idx + stride_i, idx + stride_j, idx + 1};
                const bool has[3] = {i + 1 < n, j + 1 < n, k + 1 < n};
                for (int d = 0; d < 3; ++d) {
                    if (!has[d]) continue;
                    if (region.exclude_center_cell) {
                        const bool nbr_excluded = (d == 0 && i + 1 == ic && j == ic && k == ic) ||
                                                  (d == 1 && i == ic && j + 1 == ic && k == ic) ||
                                                  (d == 2 && i == ic && j == ic && k + 1 == ic);
                        if (excluded || nbr_excluded) continue;
                    }
                    const QTensor diff = field.values[nbr[d]] - q;
                    elastic.add(0.5 * h * norm2(diff));
                }
            }
    EnergyBreakdown e;
    e.elastic = elastic.value();
    e.bulk = bulk.value();
    e.total = e.elastic + e.bulk;
    return e;
}

/// Per-node energy density e_eps = |grad Q|^2 / 2 + f_b/eps^2, with centered
/// differences in the interior and one-sided differences on the outer layer.
inline std::vector<double> energy_density(const QField& field, const MaterialParams& p) {
    const GridSpec& g = field.grid;
    const int n = g.n_cells;
    const double h = g.spacing();
    const double inv_eps2 = 1.0 / (p.eps * p.eps);
    std::vector<double> out(g.node_count());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                const int idx3[3] = {i, j, k};
                double grad2 = 0.0;
                for (int d = 0; d < 3; ++d) {
                    int lo[3] = {i, j, k}, hi[3] = {i, j, k};
                    double denom;
                    if (idx3[d] == 0) {
                        hi[d] += 1;
                        denom = h;
                    } else if (idx3[d] == n - 1) {
                        lo[d] -= 1;
                        denom = h;
                    } else {
                        lo[d] -= 1;
                        hi[d] += 1;
                        denom = 2.0 * h;
                    }
                    const QTensor diff =
                        field.at(hi[0], hi[1], hi[2]) - field.at(lo[0], lo[1], lo[2]);
                    grad2 += norm2(diff) / (denom * denom);
                }
                out[g.index(i, j, k)] =
                    0.5 * grad2 + bulk_energy(field.values[g.index(i, j, k)], p) * inv_eps2;
            }
    return out;
}

/// Exact coefficient-wise gradient of the whole-domain total_energy with
/// respect to the free (non-Dirichlet) node values, in h^3-scaled units:
/// h^3 [ -(7-point laplacian of Q) + eps^-2 bulk_gradient ]. Zero at
/// Dirichlet nodes.
inline void discrete_gradient(const QField& field, const MaterialParams& p,
                              std::vector<QTensor>& out) {
    const GridSpec& g = field.grid;
    const int n = g.n_cells;
    const double h = g.spacing();
    const double h3_inv_eps2 = h * h * h / (p.eps * p.eps);
    out.assign(g.node_count(), QTensor{});
    const std::size_t si = static_cast<std::size_t>(n) * n, sj = n, sk = 1;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                const std::size_t idx = g.index(i, j, k);
                if (field.dirichlet[idx]) continue;
                // free nodes always have all six neighbors (outer layer is Dirichlet)
                const QTensor& q = field.values[idx];
                QTensor lap = 6.0 * q;
                lap -= field.values[idx - si];
                lap -= field.values[idx + si];
                lap -= field.values[idx - sj];
                lap -= field.values[idx + sj];
                lap -= field.values[idx - sk];
                lap -= field.values[idx + sk];
                out[idx] = h * lap + h3_inv_eps2 * bulk_gradient(q, p);
            }
}

inline std::vector<QTensor> discrete_gradient(const QField& field, const MaterialParams& p) {
    std::vector<QTensor> out;
    discrete_gradient(field, p, out);
    return out;
}

/// Scale-normalized energy (1/R) * total_energy over the ball of radius R
/// about the grid center; nondecreasing in R for minimizers up to O(h).
inline double ball_ratio(const QField& field, const MaterialParams& p, double R,
                         bool exclude_center_cell = false) {
    const double h = field.grid.spacing();
    if (!(R > h) || R > field.grid.half_width + 1e-12)
        throw std::invalid_argument("ball_ratio: R must satisfy h < R <= half_width");
    return total_energy(field, p, Region::ball(R, exclude_center_cell)).total / R;
}

/// Annulus integral of the scaled squared radial derivative,
///   sum over nodes with R <= |x-center| <= 2R of (1/|x-c|) |dQ/dr|^2 h^3,
/// with dQ/dr the centered difference of the interpolant at x +/- h rhat.
inline double radial_decay_integral(const QField& field, const Vec3& center, double R) {
    const GridSpec& g = field.grid;
    const int n = g.n_cells;
    const double h = g.spacing();
    if (!(R >= 3.0 * h))
        throw std::invalid_argument("radial_decay_integral: annulus thinner than 3h");
    const double hull = g.hull_half_width();
    if (2.0 * R + h > hull && !(norm(center - g.center) > 0.0))
        if (2.0 * R + h > std::sqrt(3.0) * hull + 1e-12)
            throw std::invalid_argument("radial_decay_integral: 2R + h exceeds the domain");
    const double h3 = h * h * h;
    detail::PairwiseSum sum;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                const Vec3 x = g.node_position(i, j, k);
                const Vec3 rel = x - center;
                const double r = norm(rel);
                if (r < R || r > 2.0 * R) continue;
                const Vec3 rhat = rel / r;
                const Vec3 xp = x + h * rhat, xm = x - h * rhat;
                if (!g.in_hull(xp) || !g.in_hull(xm)) continue;  // corner nodes past the inscribed ball
                const QTensor dr = (interpolate(field, xp) - interpolate(field, xm)) * (1.0 / (2.0 * h));
                sum.add(norm2(dr) / r * h3);
            }
    return sum.value();
}

}  // namespace ldg
