#include "macflow/diagnostics.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace macflow {

std::vector<double> order_parameter(const MatrixField& f) {
    if (f.m2 != 2 || f.m1 < 2)
        throw std::invalid_argument("order_parameter: needs m2 = 2 and m1 >= 2");
    std::vector<double> c(static_cast<std::size_t>(f.points()));
    const int nc = f.comps();
    for (int p = 0; p < f.points(); ++p) {
        const double* u = f.data.data() + static_cast<std::size_t>(p) * nc;
        c[p] = u[0] * u[3] - u[1] * u[2];
    }
    return c;
}

double u31_sup(const MatrixField& f) {
    if (f.m1 != 3) throw std::invalid_argument("u31_sup: needs m1 = 3");
    double best = 0.0;
    const int nc = f.comps();
    for (int p = 0; p < f.points(); ++p)
        best = std::max(best, std::abs(f.data[static_cast<std::size_t>(p) * nc + 2 * f.m2]));
    return best;
}

namespace {

struct EdgeRef {
    int orient; // 0: along x from (ix,iy) to (ix+1,iy); 1: along y
    int ix, iy;
};

long edge_key(const EdgeRef& e, int nx, int ny) {
    return (static_cast<long>(e.orient) * nx + e.ix) * ny + e.iy;
}

} // namespace

std::vector<Polyline> zero_contour(const std::vector<double>& c, int nx, int ny, double dx,
                                   double dy, double x0, double y0) {
    if (static_cast<int>(c.size()) != nx * ny)
        throw std::invalid_argument("zero_contour: field size mismatch");
    auto val = [&](int ix, int iy) { return c[static_cast<std::size_t>(ix) * ny + iy]; };
    auto pos = [&](double v) { return v >= 0.0; };

    // crossing coordinates per edge, keyed so shared edges chain exactly
    std::map<long, std::array<double, 2>> crossing;
    auto cross_point = [&](const EdgeRef& e) -> std::array<double, 2> {
        const int jx = (e.ix + (e.orient == 0 ? 1 : 0)) % nx;
        const int jy = (e.iy + (e.orient == 1 ? 1 : 0)) % ny;
        const double ca = val(e.ix, e.iy), cb = val(jx, jy);
        const double t = ca / (ca - cb); // sign change guarantees ca != cb
        if (e.orient == 0)
            return {x0 + std::fmod(e.ix + t, static_cast<double>(nx)) * dx, y0 + e.iy * dy};
        return {x0 + e.ix * dx, y0 + std::fmod(e.iy + t, static_cast<double>(ny)) * dy};
    };

    std::map<long, std::vector<long>> adj;
    auto add_segment = [&](const EdgeRef& a, const EdgeRef& b) {
        const long ka = edge_key(a, nx, ny), kb = edge_key(b, nx, ny);
        if (!crossing.count(ka)) crossing[ka] = cross_point(a);
        if (!crossing.count(kb)) crossing[kb] = cross_point(b);
        adj[ka].push_back(kb);
        adj[kb].push_back(ka);
    };

    for (int ix = 0; ix < nx; ++ix) {
        const int ix1 = (ix + 1) % nx;
        for (int iy = 0; iy < ny; ++iy) {
            const int iy1 = (iy + 1) % ny;
            const double va = val(ix, iy), vb = val(ix1, iy), vc = val(ix1, iy1),
                         vd = val(ix, iy1);
            const int code = (pos(va) ? 1 : 0) | (pos(vb) ? 2 : 0) | (pos(vc) ? 4 : 0) |
                             (pos(vd) ? 8 : 0);
            if (code == 0 || code == 15) continue;
            const EdgeRef bottom{0, ix, iy}, right{1, ix1, iy}, top{0, ix, iy1}, left{1, ix, iy};
            switch (code) {
            case 1:
            case 14:
                add_segment(bottom, left);
                break;
            case 2:
            case 13:
                add_segment(bottom, right);
                break;
            case 3:
            case 12:
                add_segment(right, left);
                break;
            case 4:
            case 11:
                add_segment(right, top);
                break;
            case 6:
            case 9:
                add_segment(bottom, top);
                break;
            case 7:
            case 8:
                add_segment(top, left);
                break;
            case 5: // saddle: a,c positive
                if (pos(va + vb + vc + vd)) {
                    add_segment(bottom, right);
                    add_segment(top, left);
                } else {
                    add_segment(bottom, left);
                    add_segment(right, top);
                }
                break;
            case 10: // saddle: b,d positive
                if (pos(va + vb + vc + vd)) {
                    add_segment(bottom, left);
                    add_segment(right, top);
                } else {
                    add_segment(bottom, right);
                    add_segment(top, left);
                }
                break;
            default:
                break;
            }
        }
    }

    // Every crossing edge is shared by exactly two cells and each adjacent
    // cell contributes one segment endpoint, so on the periodic domain the
    // graph is a union of simple cycles (degree 2). Open chains below are
    // only a guard for degenerate sign patterns.
    std::vector<Polyline> lines;
    std::map<long, int> remaining;
    for (auto& [k, v] : adj) remaining[k] = static_cast<int>(v.size());
    auto consume_walk = [&](long start) {
        Polyline line;
        line.pts.push_back(crossing[start]);
        long prev = -1, cur = start;
        while (remaining[cur] > 0) {
            long next = -1;
            for (long cand : adj[cur]) {
                if (cand == prev && adj[cur].size() > 1) continue;
                if (remaining[cand] > 0) {
                    next = cand;
                    break;
                }
            }
            if (next == -1) break;
            --remaining[cur];
            --remaining[next];
            line.pts.push_back(crossing[next]);
            if (next == start && remaining[start] <= 0) {
                line.closed = true;
                break;
            }
            prev = cur;
            cur = next;
        }
        return line;
    };

    for (auto& [k, deg] : remaining) {
        if (deg == 1) {
            Polyline line = consume_walk(k);
            if (line.pts.size() > 1) lines.push_back(std::move(line));
        }
    }
    for (auto& [k, deg] : remaining) {
        while (deg > 0) {
            Polyline line = consume_walk(k);
            if (line.pts.size() > 1)
                lines.push_back(std::move(line));
            else
                break;
        }
    }
    return lines;
}

double total_contour_length(const std::vector<Polyline>& lines) {
    double total = 0.0;
    for (const Polyline& line : lines) {
        for (std::size_t i = 0; i + 1 < line.pts.size(); ++i) {
            double ddx = std::abs(line.pts[i + 1][0] - line.pts[i][0]);
            double ddy = std::abs(line.pts[i + 1][1] - line.pts[i][1]);
            ddx = std::min(ddx, 1.0 - ddx);
            ddy = std::min(ddy, 1.0 - ddy);
            total += std::hypot(ddx, ddy);
        }
    }
    return total;
}

SeriesRecord record(long step, double t, const MatrixField& f, const EnergyReport& energy,
                    const StepStats& stats) {
    SeriesRecord rec;
    rec.step = step;
    rec.t = t;
    rec.sup_frob = sup_frob(f);
    rec.energy_total = energy.total;
    rec.energy_grad = energy.gradient_part;
    rec.energy_pot = energy.potential_part;
    rec.alpha_min = stats.alpha_min;
    if (f.m1 == 3) rec.u31_sup = u31_sup(f);
    return rec;
}

} // namespace macflow
