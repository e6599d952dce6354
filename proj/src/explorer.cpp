#include "lyapcert/explorer.hpp"

#include <omp.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>

namespace lyapcert {

int worker_count() {
    if (const char* env = std::getenv("LYAPCERT_WORKERS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
    }
    return omp_get_max_threads();
}

const SineTable& shared_sine_table(int K) {
    static std::mutex mu;
    static std::map<int, std::unique_ptr<SineTable>> tables;
    const int need = std::max(512, K);
    std::lock_guard<std::mutex> lock(mu);
    auto it = tables.lower_bound(need);
    if (it != tables.end()) return *it->second;
    auto t = std::make_unique<SineTable>(sine_integral_multiples(need));
    return *tables.emplace(need, std::move(t)).first->second;
}

namespace {

using clk = std::chrono::steady_clock;

PointResult attempt(const MapParams& p, const NoiseParams& n, int K, const PointOptions& opts,
                    const DeterministicMatrix* cached) {
    const auto t0 = clk::now();
    PointResult res;
    SweepRow& row = res.row;
    row.alpha = p.alpha;
    row.beta = p.beta;
    row.sigma = n.sigma;
    row.K = K;
    try {
        DensityEnclosure d = enclose_density(TestMap::family(p), n, K, opts.cert, cached);
        LyapunovEnclosure l = lyapunov_enclosure(d, p, shared_sine_table(K));
        row.lambda_lo = l.lambda.lo();
        row.lambda_hi = l.lambda.hi();
        row.err_l2 = d.E.hi();
        row.eps = d.eps.hi();
        row.n_mix = d.cert.N;
        row.cn_hi = d.cert.cn();
        row.gamma = d.gamma.hi();
        row.mixing = d.cert.C;
        row.ok = true;
        res.density = std::move(d);
        res.lyapunov = l;
    } catch (const AssemblyError& e) {
        row.tag = std::string("assembly: ") + e.what();
    } catch (const ConvergenceError& e) {
        row.tag = std::string("convergence: ") + e.what();
    } catch (const CertificationError& e) {
        row.tag = std::string("certification: ") + e.what();
    } catch (const SingularityError& e) {
        row.tag = std::string("singularity: ") + e.what();
    }
    row.runtime_s = std::chrono::duration<double>(clk::now() - t0).count();
    return res;
}

}  // namespace

PointResult evaluate_point(const MapParams& p, const NoiseParams& n, int K, const PointOptions& opts,
                           const DeterministicMatrix* cached) {
    p.validate();
    n.validate();
    PointResult first = attempt(p, n, K, opts, cached);
    if (!opts.auto_double || 2 * K > opts.max_K) return first;
    if (first.row.ok && !first.row.indeterminate()) return first;
    PointResult second = attempt(p, n, 2 * K, opts, nullptr);
    second.row.runtime_s += first.row.runtime_s;
    if (second.row.ok || !first.row.ok) return second;
    first.row.runtime_s = second.row.runtime_s;
    return first;
}

SweepRow run_point(const MapParams& p, const NoiseParams& n, int K, const PointOptions& opts) {
    return evaluate_point(p, n, K, opts).row;
}

double Range::value(int i) const {
    if (count <= 1) return lo;
    if (i == count - 1) return hi;
    return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
}

Range Range::parse(const std::string& s) {
    Range r;
    std::vector<std::string> parts;
    std::stringstream ss(s);
    for (std::string tok; std::getline(ss, tok, ':');) parts.push_back(tok);
    try {
        if (parts.size() == 1) {
            r.lo = r.hi = std::stod(parts[0]);
            r.count = 1;
        } else if (parts.size() == 3) {
            r.lo = std::stod(parts[0]);
            r.hi = std::stod(parts[1]);
            r.count = std::stoi(parts[2]);
        } else {
            throw DomainError("range must be lo:hi:n or a number: '" + s + "'");
        }
    } catch (const std::logic_error&) {
        throw DomainError("cannot parse range '" + s + "'");
    }
    if (r.count < 1 || (r.count > 1 && !(r.lo <= r.hi))) throw DomainError("bad range '" + s + "'");
    return r;
}

namespace {

struct Group {
    std::once_flag built;
    std::shared_ptr<DeterministicMatrix> M;
    std::string failure;
    std::atomic<int> remaining{0};
};

}  // namespace

std::vector<SweepRow> sweep(const SweepConfig& cfg) {
    const int na = cfg.alpha.count, nb = cfg.beta.count, ns = cfg.sigma.count;
    if (na < 1 || nb < 1 || ns < 1) throw DomainError("sweep: counts must be >= 1");
    for (int i = 0; i < na; ++i) MapParams{cfg.alpha.value(i), cfg.beta.value(0)}.validate();
    for (int i = 0; i < nb; ++i) MapParams{cfg.alpha.value(0), cfg.beta.value(i)}.validate();
    for (int i = 0; i < ns; ++i) NoiseParams{cfg.sigma.value(i)}.validate();

    PointOptions opts = cfg.opts;
    if (opts.cert.tol.sigma == 0.0) opts.cert.tol.sigma = std::min(cfg.sigma.lo, cfg.sigma.hi);

    const long groups = static_cast<long>(na) * nb;
    const long total = groups * ns;
    std::unique_ptr<Group[]> group(new Group[static_cast<std::size_t>(groups)]);
    for (long g = 0; g < groups; ++g) group[g].remaining = ns;

    std::vector<SweepRow> rows(static_cast<std::size_t>(total));
    std::string sink_error;
    const int workers = cfg.workers > 0 ? cfg.workers : worker_count();

#pragma omp parallel for schedule(dynamic, 1) ordered num_threads(workers)
    for (long idx = 0; idx < total; ++idx) {
        const long g = idx / ns;
        const int is = static_cast<int>(idx % ns);
        const int ia = static_cast<int>(g / nb);
        const int ib = static_cast<int>(g % nb);
        const MapParams p{cfg.alpha.value(ia), cfg.beta.value(ib)};
        const NoiseParams n{cfg.sigma.value(is)};
        Group& grp = group[g];

        std::call_once(grp.built, [&] {
            try {
                grp.M = std::make_shared<DeterministicMatrix>(
                    assemble_deterministic(TestMap::family(p), cfg.K, opts.cert.tol));
            } catch (const AssemblyError& e) {
                grp.failure = std::string("assembly: ") + e.what();
            }
        });

        SweepRow row;
        if (grp.M) {
            row = evaluate_point(p, n, cfg.K, opts, grp.M.get()).row;
        } else {
            row.alpha = p.alpha;
            row.beta = p.beta;
            row.sigma = n.sigma;
            row.K = cfg.K;
            row.tag = grp.failure;
        }
        if (!cfg.record_runtime) row.runtime_s = 0.0;
        if (--grp.remaining == 0) grp.M.reset();

#pragma omp ordered
        {
            rows[static_cast<std::size_t>(idx)] = row;
            if (cfg.on_row && sink_error.empty()) {
                try {
                    cfg.on_row(row);
                } catch (const std::exception& e) {
                    sink_error = e.what();
                }
            }
        }
    }
    if (!sink_error.empty()) throw IoError(sink_error);
    return rows;
}

std::vector<Bracket> detect_crossings(const std::vector<SweepRow>& rows) {
    std::vector<Bracket> out;
    for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
        const SweepRow& a = rows[i];
        const SweepRow& b = rows[i + 1];
        if (a.indeterminate() || b.indeterminate() || a.positive() == b.positive()) continue;
        Bracket br;
        br.sigma1 = a.sigma;
        br.lambda1 = Interval(a.lambda_lo, a.lambda_hi);
        br.sigma2 = b.sigma;
        br.lambda2 = Interval(b.lambda_lo, b.lambda_hi);
        br.descending = a.positive();
        out.push_back(br);
    }
    return out;
}

std::vector<GroupedBracket> detect_all_crossings(std::vector<SweepRow> rows) {
    std::stable_sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
        if (a.alpha != b.alpha) return a.alpha < b.alpha;
        if (a.beta != b.beta) return a.beta < b.beta;
        return a.sigma < b.sigma;
    });
    std::vector<GroupedBracket> out;
    for (std::size_t i = 0; i < rows.size();) {
        std::size_t j = i;
        while (j < rows.size() && rows[j].alpha == rows[i].alpha && rows[j].beta == rows[i].beta) ++j;
        std::vector<SweepRow> col(rows.begin() + static_cast<long>(i), rows.begin() + static_cast<long>(j));
        for (const Bracket& b : detect_crossings(col)) out.push_back({rows[i].alpha, rows[i].beta, b});
        i = j;
    }
    return out;
}

namespace {

bool certified(const std::optional<Interval>& l) { return l && !l->contains_zero(); }

}  // namespace

RefineResult refine_crossing(const LambdaOracle& oracle, const Bracket& start, double width_target, int K,
                             int max_K, int max_steps) {
    if (!(start.sigma1 < start.sigma2)) throw DomainError("refine_crossing: need sigma1 < sigma2");
    if (start.lambda1.contains_zero() || start.lambda2.contains_zero() ||
        start.lambda1.positive() == start.lambda2.positive())
        throw DomainError("refine_crossing: endpoints lack certified opposite signs");
    RefineResult r;
    r.bracket = start;
    r.K = K;
    Bracket& b = r.bracket;
    while (b.sigma2 - b.sigma1 > width_target) {
        if (r.steps >= max_steps) {
            r.stalled = true;
            break;
        }
        const double mid = b.sigma1 + 0.5 * (b.sigma2 - b.sigma1);
        if (!(mid > b.sigma1 && mid < b.sigma2)) {
            r.stalled = true;
            break;
        }
        std::optional<Interval> lam = oracle(mid, r.K);
        while (!certified(lam) && 2 * r.K <= max_K) {
            r.K *= 2;
            lam = oracle(mid, r.K);
        }
        if (!certified(lam)) {
            r.stalled = true;
            break;
        }
        ++r.steps;
        if (lam->positive() == b.lambda1.positive()) {
            b.sigma1 = mid;
            b.lambda1 = *lam;
        } else {
            b.sigma2 = mid;
            b.lambda2 = *lam;
        }
    }
    return r;
}

RefineResult refine_crossing(double alpha, double beta, const Bracket& start, double width_target, int K,
                             const PointOptions& opts) {
    PointOptions o = opts;
    o.auto_double = false;  // escalation is handled by the bisection
    const MapParams p{alpha, beta};
    LambdaOracle oracle = [&](double sigma, int k) -> std::optional<Interval> {
        SweepRow row = run_point(p, NoiseParams{sigma}, k, o);
        if (!row.ok) return std::nullopt;
        return Interval(row.lambda_lo, row.lambda_hi);
    };
    return refine_crossing(oracle, start, width_target, K, opts.max_K);
}

}  // namespace lyapcert
