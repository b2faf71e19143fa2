#include "rbm/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <condition_variable>
#include <mutex>
#include <thread>

#include "rbm/rng.hpp"

namespace rbm {

namespace {

constexpr double kFeasTol = 1e-12;

// Leading-order constant of the discrete-reflection undershoot.
constexpr double kWallShift = 0.5826;

// Minimal nonnegative pushback along the reflection columns returning the
// projected point.  Feasible by the completely-S property; asserted.
inline void pushback(const Mat2& R, double zx, double zy, double& dl1, double& dl2,
                     double& ox, double& oy) {
    double best = kInf;
    bool found = false;
    if (zx < 0.0) {
        const double d1 = -zx / R.a11;
        const double ny = zy + R.a21 * d1;
        if (ny >= -kFeasTol && d1 < best) {
            best = d1;
            dl1 = d1;
            dl2 = 0.0;
            ox = 0.0;
            oy = std::max(ny, 0.0);
            found = true;
        }
    }
    if (zy < 0.0) {
        const double d2 = -zy / R.a22;
        const double nx = zx + R.a12 * d2;
        if (nx >= -kFeasTol && d2 < best) {
            best = d2;
            dl1 = 0.0;
            dl2 = d2;
            ox = std::max(nx, 0.0);
            oy = 0.0;
            found = true;
        }
    }
    const double det = R.det();
    if (det != 0.0) {
        const double c1 = (-R.a22 * zx + R.a12 * zy) / det;
        const double c2 = (R.a21 * zx - R.a11 * zy) / det;
        if (c1 >= -kFeasTol && c2 >= -kFeasTol && c1 + c2 < best) {
            dl1 = std::max(c1, 0.0);
            dl2 = std::max(c2, 0.0);
            ox = 0.0;
            oy = 0.0;
            found = true;
        }
    }
    if (!found) {
        throw NumericError("pushback solve infeasible (violated completely-S?)");
    }
}

struct GroupBuffers {
    std::vector<double> occ, h1, h2;
    std::vector<cd> phi;
    std::vector<double> green;
    long truncated = 0;
    long n_paths = 0;
};

struct Grid {
    int nx, ny, nb;
    double inv_bw, inv_bbw, range;
};

cd bin_factor(cd arg, double width) {
    const cd u = arg * (0.5 * width);
    if (std::abs(u) < 1e-8) return 1.0 + u * u / 6.0;
    return std::sinh(u) / u;
}

// sum_j mass[j] * exp(arg * (j + 1/2) w) with the midpoint bin correction.
cd histogram_transform(const double* mass, int n, double width, cd arg) {
    const cd ratio = std::exp(arg * width);
    cd pow = std::exp(arg * 0.5 * width);
    cd sum = 0.0;
    for (int j = 0; j < n; ++j) {
        sum += mass[j] * pow;
        pow *= ratio;
    }
    return sum * bin_factor(arg, width);
}

void run_group(const QuadrantParams& p, const SimConfig& cfg, const Grid& g,
               long first_path, long n_paths, GroupBuffers& out,
               const std::vector<long>& green_cells) {
    const double sdt = std::sqrt(cfg.dt);
    const double l11 = std::sqrt(p.s11);
    const double l21 = p.s12 / l11;
    const double l22 = std::sqrt(p.s22 - l21 * l21);
    const double horizon2 = cfg.horizon_radius * cfg.horizon_radius;
    const double wx = cfg.boundary_shift_correction ? kWallShift * sdt * std::sqrt(p.s11) : 0.0;
    const double wy = cfg.boundary_shift_correction ? kWallShift * sdt * std::sqrt(p.s22) : 0.0;

    std::fill(out.occ.begin(), out.occ.end(), 0.0);
    std::fill(out.h1.begin(), out.h1.end(), 0.0);
    std::fill(out.h2.begin(), out.h2.end(), 0.0);
    out.truncated = 0;
    out.n_paths = n_paths;

    for (long i = 0; i < n_paths; ++i) {
        PathRng rng(cfg.seed, static_cast<std::uint64_t>(first_path + i));
        double zx = p.z0.x, zy = p.z0.y;
        double t = 0.0;
        while (true) {
            {
                int ix = static_cast<int>(zx * g.inv_bw);
                int iy = static_cast<int>(zy * g.inv_bw);
                if (ix >= 0 && iy >= 0) {
                    if (ix >= g.nx) ix = g.nx - 1;
                    if (iy >= g.ny) iy = g.ny - 1;
                    out.occ[static_cast<size_t>(ix) * g.ny + iy] += cfg.dt;
                }
            }
            const double n1 = rng.next_normal();
            const double n2 = rng.next_normal();
            double nzx = zx + p.mu.x * cfg.dt + sdt * (l11 * n1);
            double nzy = zy + p.mu.y * cfg.dt + sdt * (l21 * n1 + l22 * n2);
            if (nzx < wx || nzy < wy) {
                double dl1 = 0.0, dl2 = 0.0, ox = nzx - wx, oy = nzy - wy;
                pushback(p.refl, nzx - wx, nzy - wy, dl1, dl2, ox, oy);
                nzx = ox + wx;
                nzy = oy + wy;
                if (dl1 > 0.0) {
                    int ib = static_cast<int>(nzy * g.inv_bbw);
                    if (ib >= g.nb) ib = g.nb - 1;
                    out.h1[ib] += dl1;
                }
                if (dl2 > 0.0) {
                    int ib = static_cast<int>(nzx * g.inv_bbw);
                    if (ib >= g.nb) ib = g.nb - 1;
                    out.h2[ib] += dl2;
                }
            }
            zx = nzx;
            zy = nzy;
            t += cfg.dt;
            if (zx * zx + zy * zy > horizon2) break;
            if (t >= cfg.max_time) {
                ++out.truncated;
                break;
            }
        }
    }

    // Registered probe statistics for this replicate.
    const size_t np = cfg.phi_probes.size();
    out.phi.assign(np, cd(0.0, 0.0));
    for (size_t pi = 0; pi < np; ++pi) {
        const cd x = cfg.phi_probes[pi].first;
        const cd y = cfg.phi_probes[pi].second;
        std::vector<cd> vy(g.ny);
        {
            const cd ratio = std::exp(y * cfg.bin_width);
            cd pw = std::exp(y * 0.5 * cfg.bin_width);
            for (int j = 0; j < g.ny; ++j) {
                vy[j] = pw;
                pw *= ratio;
            }
        }
        const cd ratio = std::exp(x * cfg.bin_width);
        cd ux = std::exp(x * 0.5 * cfg.bin_width);
        cd acc = 0.0;
        for (int ix = 0; ix < g.nx; ++ix) {
            const double* row = out.occ.data() + static_cast<size_t>(ix) * g.ny;
            cd s = 0.0;
            for (int j = 0; j < g.ny; ++j) {
                if (row[j] != 0.0) s += row[j] * vy[j];
            }
            acc += ux * s;
            ux *= ratio;
        }
        out.phi[pi] = acc * bin_factor(x, cfg.bin_width) * bin_factor(y, cfg.bin_width);
    }
    out.green.assign(green_cells.size(), 0.0);
    for (size_t gi = 0; gi < green_cells.size(); ++gi) {
        if (green_cells[gi] >= 0) out.green[gi] = out.occ[green_cells[gi]];
    }
}

void validate_config(const QuadrantParams& p, const SimConfig& cfg) {
    if (!(cfg.dt > 0.0) || cfg.n_paths < 1 ||
        !(cfg.horizon_radius > std::hypot(p.z0.x, p.z0.y))) {
        throw ValidationError(ModelDefect::start_outside_quadrant,
                              "bad simulation config: need dt > 0, n_paths >= 1, "
                              "horizon_radius > |z0|");
    }
    for (const auto& pr : cfg.phi_probes) {
        if (!(pr.first.real() < 0.0) || !(pr.second.real() < 0.0)) {
            throw NumericError("phi probes must have Re x < 0 and Re y < 0");
        }
    }
}

}  // namespace

long SimArtifact::cell_index(double a, double b) const {
    const int ix = static_cast<int>(std::floor(a / cfg.bin_width));
    const int iy = static_cast<int>(std::floor(b / cfg.bin_width));
    if (ix < 0 || iy < 0 || ix >= nx || iy >= ny) return -1;
    return static_cast<long>(ix) * ny + iy;
}

SimArtifact simulate(const QuadrantParams& params, const SimConfig& cfg) {
    validate(params);
    validate_config(params, cfg);

    SimArtifact art;
    art.params = params;
    art.cfg = cfg;

    Grid g;
    g.range = cfg.horizon_radius + 1.0;
    g.nx = g.ny = static_cast<int>(std::ceil(g.range / cfg.bin_width));
    g.nb = static_cast<int>(std::ceil(g.range / cfg.boundary_bin_width));
    g.inv_bw = 1.0 / cfg.bin_width;
    g.inv_bbw = 1.0 / cfg.boundary_bin_width;

    art.nx = g.nx;
    art.ny = g.ny;
    art.nb = g.nb;
    art.occ.assign(static_cast<size_t>(g.nx) * g.ny, 0.0);

    const int R = static_cast<int>(std::min<long>(cfg.n_replicates, cfg.n_paths));
    art.R = R;
    art.h1_rep.assign(static_cast<size_t>(R) * g.nb, 0.0);
    art.h2_rep.assign(static_cast<size_t>(R) * g.nb, 0.0);
    art.phi_rep.assign(static_cast<size_t>(R) * cfg.phi_probes.size(), cd(0.0, 0.0));
    art.green_rep.assign(static_cast<size_t>(R) * cfg.green_probes.size(), 0.0);
    art.l1_rep.assign(R, 0.0);
    art.l2_rep.assign(R, 0.0);
    art.paths_rep.assign(R, 0);
    art.truncated_rep.assign(R, 0);
    art.n_paths = cfg.n_paths;

    std::vector<long> green_cells;
    for (const Vec2& pt : cfg.green_probes) green_cells.push_back(art.cell_index(pt.x, pt.y));

    std::vector<long> group_first(R), group_count(R);
    {
        const long base = cfg.n_paths / R, rem = cfg.n_paths % R;
        long off = 0;
        for (int k = 0; k < R; ++k) {
            group_count[k] = base + (k < rem ? 1 : 0);
            group_first[k] = off;
            off += group_count[k];
        }
    }

    int n_threads = cfg.n_threads > 0
                        ? cfg.n_threads
                        : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    n_threads = std::min<int>(n_threads, R);

    std::atomic<int> next_group{0};
    std::mutex merge_mutex;
    std::condition_variable merge_cv;
    int merge_cursor = 0;
    std::exception_ptr first_error;

    auto worker = [&]() {
        GroupBuffers buf;
        buf.occ.assign(art.occ.size(), 0.0);
        buf.h1.assign(g.nb, 0.0);
        buf.h2.assign(g.nb, 0.0);
        while (true) {
            const int k = next_group.fetch_add(1);
            if (k >= R) break;
            try {
                run_group(params, cfg, g, group_first[k], group_count[k], buf, green_cells);
            } catch (...) {
                std::lock_guard<std::mutex> lock(merge_mutex);
                if (!first_error) first_error = std::current_exception();
                merge_cv.notify_all();
                break;
            }
            // Merge strictly in group order so totals are scheduling-independent.
            std::unique_lock<std::mutex> lock(merge_mutex);
            merge_cv.wait(lock, [&] { return merge_cursor == k || first_error; });
            if (first_error) break;
            for (size_t j = 0; j < art.occ.size(); ++j) art.occ[j] += buf.occ[j];
            double l1 = 0.0, l2 = 0.0;
            for (int j = 0; j < g.nb; ++j) {
                art.h1_rep[static_cast<size_t>(k) * g.nb + j] = buf.h1[j];
                art.h2_rep[static_cast<size_t>(k) * g.nb + j] = buf.h2[j];
                l1 += buf.h1[j];
                l2 += buf.h2[j];
            }
            art.l1_rep[k] = l1;
            art.l2_rep[k] = l2;
            for (size_t j = 0; j < buf.phi.size(); ++j) {
                art.phi_rep[static_cast<size_t>(k) * buf.phi.size() + j] = buf.phi[j];
            }
            for (size_t j = 0; j < buf.green.size(); ++j) {
                art.green_rep[static_cast<size_t>(k) * buf.green.size() + j] = buf.green[j];
            }
            art.paths_rep[k] = buf.n_paths;
            art.truncated_rep[k] = buf.truncated;
            ++merge_cursor;
            merge_cv.notify_all();
        }
    };

    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (first_error) std::rethrow_exception(first_error);

    art.h1.assign(g.nb, 0.0);
    art.h2.assign(g.nb, 0.0);
    for (int k = 0; k < R; ++k) {
        for (int j = 0; j < g.nb; ++j) {
            art.h1[j] += art.h1_rep[static_cast<size_t>(k) * g.nb + j];
            art.h2[j] += art.h2_rep[static_cast<size_t>(k) * g.nb + j];
        }
    }
    long trunc = 0;
    for (int k = 0; k < R; ++k) trunc += art.truncated_rep[k];
    art.truncated_fraction = static_cast<double>(trunc) / static_cast<double>(cfg.n_paths);
    return art;
}

std::vector<PathPoint> simulate_path(const QuadrantParams& params, const SimConfig& cfg,
                                     std::uint64_t path_index) {
    validate(params);
    validate_config(params, cfg);
    const double sdt = std::sqrt(cfg.dt);
    const double l11 = std::sqrt(params.s11);
    const double l21 = params.s12 / l11;
    const double l22 = std::sqrt(params.s22 - l21 * l21);

    PathRng rng(cfg.seed, path_index);
    const double wx =
        cfg.boundary_shift_correction ? kWallShift * sdt * std::sqrt(params.s11) : 0.0;
    const double wy =
        cfg.boundary_shift_correction ? kWallShift * sdt * std::sqrt(params.s22) : 0.0;
    std::vector<PathPoint> out;
    double zx = params.z0.x, zy = params.z0.y, t = 0.0;
    out.push_back({0.0, {zx, zy}, 0.0, 0.0});
    while (t < cfg.max_time && std::hypot(zx, zy) <= cfg.horizon_radius) {
        const double n1 = rng.next_normal();
        const double n2 = rng.next_normal();
        double nzx = zx + params.mu.x * cfg.dt + sdt * (l11 * n1);
        double nzy = zy + params.mu.y * cfg.dt + sdt * (l21 * n1 + l22 * n2);
        double dl1 = 0.0, dl2 = 0.0;
        if (nzx < wx || nzy < wy) {
            double ox = nzx - wx, oy = nzy - wy;
            pushback(params.refl, nzx - wx, nzy - wy, dl1, dl2, ox, oy);
            nzx = ox + wx;
            nzy = oy + wy;
        }
        zx = nzx;
        zy = nzy;
        t += cfg.dt;
        out.push_back({t, {zx, zy}, dl1, dl2});
    }
    return out;
}

namespace {

template <typename T>
std::pair<T, double> replicate_stats(const std::vector<T>& values,
                                     const std::vector<long>& counts, long total) {
    T mean{};
    for (size_t k = 0; k < values.size(); ++k) {
        mean += values[k] * (static_cast<double>(counts[k]) / static_cast<double>(total));
    }
    if (values.size() < 2) return {mean, 0.0};
    double var = 0.0;
    for (const T& v : values) {
        const auto d = v - mean;
        var += std::norm(cd(d));
    }
    var /= static_cast<double>(values.size() - 1);
    return {mean, std::sqrt(var / static_cast<double>(values.size()))};
}

}  // namespace

OccupationEstimate estimate_green(const SimArtifact& art, Vec2 pt) {
    const double bw = art.cfg.bin_width;
    if (!(pt.x > 0.0) || !(pt.y > 0.0) ||
        (std::abs(pt.x - art.params.z0.x) < bw && std::abs(pt.y - art.params.z0.y) < bw)) {
        throw NumericError("green estimate requires an interior point at least one bin from z0");
    }
    const long cell = art.cell_index(pt.x, pt.y);
    if (cell < 0) throw NumericError("point outside the occupation grid");

    OccupationEstimate est;
    est.n_paths = art.n_paths;
    est.truncated_fraction = art.truncated_fraction;
    const double denom = bw * bw;
    est.value = art.occ[cell] / (denom * static_cast<double>(art.n_paths));

    // Replicate spread, available when the point was registered.
    for (size_t gi = 0; gi < art.cfg.green_probes.size(); ++gi) {
        if (art.cell_index(art.cfg.green_probes[gi].x, art.cfg.green_probes[gi].y) == cell) {
            std::vector<double> vals(art.R);
            for (int k = 0; k < art.R; ++k) {
                vals[k] = art.green_rep[static_cast<size_t>(k) * art.cfg.green_probes.size() + gi] /
                          (denom * static_cast<double>(art.paths_rep[k]));
            }
            auto [mean, se] = replicate_stats(vals, art.paths_rep, art.n_paths);
            est.value = mean;
            est.std_error = se;
            return est;
        }
    }
    est.std_error = kNaN;
    return est;
}

OccupationEstimate estimate_boundary(const SimArtifact& art, double u, int axis) {
    if (!(u >= 0.0)) throw NumericError("boundary coordinate must be nonnegative");
    const double bbw = art.cfg.boundary_bin_width;
    int ib = static_cast<int>(u / bbw);
    if (ib >= art.nb) throw NumericError("coordinate outside the boundary grid");
    const std::vector<double>& rep = axis == 1 ? art.h1_rep : art.h2_rep;

    std::vector<double> vals(art.R);
    for (int k = 0; k < art.R; ++k) {
        vals[k] = rep[static_cast<size_t>(k) * art.nb + ib] /
                  (bbw * static_cast<double>(art.paths_rep[k]));
    }
    auto [mean, se] = replicate_stats(vals, art.paths_rep, art.n_paths);
    OccupationEstimate est;
    est.value = mean;
    est.std_error = se;
    est.n_paths = art.n_paths;
    est.truncated_fraction = art.truncated_fraction;
    return est;
}

OccupationEstimate local_time_total(const SimArtifact& art, int axis) {
    const std::vector<double>& rep = axis == 1 ? art.l1_rep : art.l2_rep;
    std::vector<double> vals(art.R);
    for (int k = 0; k < art.R; ++k) vals[k] = rep[k] / static_cast<double>(art.paths_rep[k]);
    auto [mean, se] = replicate_stats(vals, art.paths_rep, art.n_paths);
    OccupationEstimate est;
    est.value = mean;
    est.std_error = se;
    est.n_paths = art.n_paths;
    est.truncated_fraction = art.truncated_fraction;
    return est;
}

ComplexEstimate estimate_phi(const SimArtifact& art, cd x, cd y) {
    if (!(x.real() < 0.0) || !(y.real() < 0.0)) {
        throw NumericError("phi requires Re x < 0 and Re y < 0");
    }
    for (size_t pi = 0; pi < art.cfg.phi_probes.size(); ++pi) {
        if (art.cfg.phi_probes[pi].first == x && art.cfg.phi_probes[pi].second == y) {
            std::vector<cd> vals(art.R);
            for (int k = 0; k < art.R; ++k) {
                vals[k] = art.phi_rep[static_cast<size_t>(k) * art.cfg.phi_probes.size() + pi] /
                          static_cast<double>(art.paths_rep[k]);
            }
            auto [mean, se] = replicate_stats(vals, art.paths_rep, art.n_paths);
            ComplexEstimate est;
            est.value = mean;
            est.std_error = se;
            est.n_paths = art.n_paths;
            est.truncated_fraction = art.truncated_fraction;
            return est;
        }
    }
    throw NumericError("phi(x, y) probe was not registered before the run");
}

cd boundary_transform_rep(const SimArtifact& art, int axis, int rep, cd arg) {
    const std::vector<double>& h = axis == 1 ? art.h1_rep : art.h2_rep;
    return histogram_transform(h.data() + static_cast<size_t>(rep) * art.nb, art.nb,
                               art.cfg.boundary_bin_width, arg) /
           static_cast<double>(art.paths_rep[rep]);
}

cd boundary_transform_mean(const SimArtifact& art, int axis, cd arg) {
    const std::vector<double>& h = axis == 1 ? art.h1 : art.h2;
    return histogram_transform(h.data(), art.nb, art.cfg.boundary_bin_width, arg) /
           static_cast<double>(art.n_paths);
}

namespace {

ComplexEstimate boundary_phi(const SimArtifact& art, int axis, cd arg) {
    if (arg.real() > 0.0) {
        throw NumericError("direct boundary transform requires Re <= 0");
    }
    std::vector<cd> vals(art.R);
    for (int k = 0; k < art.R; ++k) vals[k] = boundary_transform_rep(art, axis, k, arg);
    auto [mean, se] = replicate_stats(vals, art.paths_rep, art.n_paths);
    ComplexEstimate est;
    est.value = mean;
    est.std_error = se;
    est.n_paths = art.n_paths;
    est.truncated_fraction = art.truncated_fraction;
    return est;
}

}  // namespace

ComplexEstimate estimate_phi1(const SimArtifact& art, cd y) { return boundary_phi(art, 1, y); }

ComplexEstimate estimate_phi2(const SimArtifact& art, cd x) { return boundary_phi(art, 2, x); }

}  // namespace rbm
