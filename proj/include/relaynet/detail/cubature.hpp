#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

namespace relaynet::detail {

// Gauss-Kronrod 7/15 abscissae and weights on [-1, 1], positive half,
// outermost node first. Gauss weights belong to the odd-indexed nodes.
inline constexpr std::array<double, 8> kGk15Nodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kGk15Weights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 8> kG7Weights = {
    0.0, 0.129484966168869693270611432679082,
    0.0, 0.279705391489276667901467771423780,
    0.0, 0.381830050505118944950369775488975,
    0.0, 0.417959183673469387755102040816327};

/// The 15 Kronrod points of [-1, 1] in ascending order with both weight sets.
struct Rule15 {
    std::array<double, 15> x{};
    std::array<double, 15> wk{};
    std::array<double, 15> wg{};
};

inline const Rule15& rule15() {
    static const Rule15 rule = [] {
        Rule15 r;
        for (std::size_t i = 0; i < 8; ++i) {
            r.x[i] = -kGk15Nodes[i];
            r.wk[i] = kGk15Weights[i];
            r.wg[i] = kG7Weights[i];
            r.x[14 - i] = kGk15Nodes[i];
            r.wk[14 - i] = kGk15Weights[i];
            r.wg[14 - i] = kG7Weights[i];
        }
        return r;
    }();
    return rule;
}

/// Neumaier-compensated running sum.
class CompensatedSum {
public:
    void add(double v) {
        const double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v))
            comp_ += (sum_ - t) + v;
        else
            comp_ += (v - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

struct Rect {
    double lo0, hi0, lo1, hi1;
};

template <std::size_t N>
struct CubatureOutcome {
    std::array<double, N> value{};
    std::array<double, N> error{};
    std::size_t cells = 0;
    bool converged = false;
};

/// Globally adaptive cubature of a vector integrand over a union of
/// rectangles. Each cell is integrated with the 15x15 tensor Kronrod rule;
/// the error in direction d is |K15xK15 - (G7 in d)xK15|, and the cell is
/// bisected along the direction with the larger error. The cell with the
/// largest normalised error is refined first.
///
/// `f(u, v)` returns std::array<double, N> and must include any Jacobian.
/// The result is independent of evaluation order: cells are visited in a
/// deterministic heap order and the final totals are re-summed with
/// compensation.
template <std::size_t N, class F>
CubatureOutcome<N> adaptive_cubature(F&& f, const std::vector<Rect>& initial, double rel_tol,
                                     double abs_tol, std::size_t max_cells) {
    struct Cell {
        Rect box;
        std::array<double, N> value;
        std::array<double, N> error;
        double priority;
        int split_dim;
    };

    const Rule15& rule = rule15();

    auto integrate_cell = [&](const Rect& box) {
        const double c0 = 0.5 * (box.lo0 + box.hi0), h0 = 0.5 * (box.hi0 - box.lo0);
        const double c1 = 0.5 * (box.lo1 + box.hi1), h1 = 0.5 * (box.hi1 - box.lo1);
        std::array<double, N> kk{}, gk{}, kg{};
        for (std::size_t i = 0; i < 15; ++i) {
            const double u = c0 + h0 * rule.x[i];
            std::array<double, N> row_k{}, row_g{};
            for (std::size_t j = 0; j < 15; ++j) {
                const std::array<double, N> v = f(u, c1 + h1 * rule.x[j]);
                for (std::size_t k = 0; k < N; ++k) {
                    row_k[k] += rule.wk[j] * v[k];
                    row_g[k] += rule.wg[j] * v[k];
                }
            }
            for (std::size_t k = 0; k < N; ++k) {
                kk[k] += rule.wk[i] * row_k[k];
                gk[k] += rule.wg[i] * row_k[k];
                kg[k] += rule.wk[i] * row_g[k];
            }
        }
        Cell cell{box, {}, {}, 0.0, 0};
        const double area = h0 * h1;
        double err0 = 0.0, err1 = 0.0;
        for (std::size_t k = 0; k < N; ++k) {
            cell.value[k] = area * kk[k];
            const double e0 = area * std::abs(kk[k] - gk[k]);
            const double e1 = area * std::abs(kk[k] - kg[k]);
            // Floor at the rounding level of the cell sum.
            const double floor = 50.0 * std::numeric_limits<double>::epsilon() * std::abs(cell.value[k]);
            cell.error[k] = e0 + e1 + floor;
            err0 += e0;
            err1 += e1;
        }
        cell.split_dim = err0 >= err1 ? 0 : 1;
        return cell;
    };

    std::vector<Cell> heap;
    heap.reserve(std::max<std::size_t>(initial.size() * 4, 64));
    std::array<double, N> total{}, total_err{};
    for (const Rect& box : initial) {
        heap.push_back(integrate_cell(box));
        for (std::size_t k = 0; k < N; ++k) {
            total[k] += heap.back().value[k];
            total_err[k] += heap.back().error[k];
        }
    }

    // Per-component scale used to rank cells; fixed after the first pass so
    // that heap keys stay valid.
    std::array<double, N> scale{};
    for (std::size_t k = 0; k < N; ++k)
        scale[k] = std::max(abs_tol, rel_tol * std::abs(total[k]));
    auto prioritise = [&](Cell& c) {
        double pr = 0.0;
        for (std::size_t k = 0; k < N; ++k)
            pr = std::max(pr, c.error[k] / scale[k]);
        c.priority = pr;
    };
    auto less = [](const Cell& a, const Cell& b) { return a.priority < b.priority; };
    for (Cell& c : heap)
        prioritise(c);
    std::make_heap(heap.begin(), heap.end(), less);

    auto satisfied = [&] {
        for (std::size_t k = 0; k < N; ++k)
            if (total_err[k] > std::max(abs_tol, rel_tol * std::abs(total[k])))
                return false;
        return true;
    };

    CubatureOutcome<N> out;
    while (!satisfied() && heap.size() < max_cells) {
        std::pop_heap(heap.begin(), heap.end(), less);
        const Cell parent = heap.back();
        heap.pop_back();
        Rect a = parent.box, b = parent.box;
        if (parent.split_dim == 0) {
            const double mid = 0.5 * (parent.box.lo0 + parent.box.hi0);
            a.hi0 = mid;
            b.lo0 = mid;
        } else {
            const double mid = 0.5 * (parent.box.lo1 + parent.box.hi1);
            a.hi1 = mid;
            b.lo1 = mid;
        }
        Cell ca = integrate_cell(a), cb = integrate_cell(b);
        for (std::size_t k = 0; k < N; ++k) {
            total[k] += ca.value[k] + cb.value[k] - parent.value[k];
            total_err[k] += ca.error[k] + cb.error[k] - parent.error[k];
        }
        for (Cell* c : {&ca, &cb}) {
            prioritise(*c);
            heap.push_back(*c);
            std::push_heap(heap.begin(), heap.end(), less);
        }
    }

    std::array<CompensatedSum, N> vs, es;
    for (const Cell& c : heap)
        for (std::size_t k = 0; k < N; ++k) {
            vs[k].add(c.value[k]);
            es[k].add(c.error[k]);
        }
    for (std::size_t k = 0; k < N; ++k) {
        out.value[k] = vs[k].value();
        out.error[k] = es[k].value();
    }
    out.cells = heap.size();
    out.converged = true;
    for (std::size_t k = 0; k < N; ++k)
        if (out.error[k] > std::max(abs_tol, rel_tol * std::abs(out.value[k])))
            out.converged = false;
    return out;
}

} // namespace relaynet::detail
