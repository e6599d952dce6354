#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "lyapcert/lyapunov.hpp"

namespace lyapcert {

// worker count from LYAPCERT_WORKERS, else the OpenMP default
int worker_count();

// table of Si(j pi) for j <= max(512, K), built once per process
const SineTable& shared_sine_table(int K);

// cert.tol.sigma = 0 tailors the assembly to the point's sigma; a sweep sets
// it to its smallest sigma so one matrix serves the whole column.
struct PointOptions {
    CertOptions cert{};
    bool auto_double = true;  // one K doubling for indeterminate or uncertified points
    int max_K = 512;
};

struct SweepRow {
    double alpha = 0.0;
    double beta = 0.0;
    double sigma = 0.0;
    int K = 0;
    double lambda_lo = 0.0;
    double lambda_hi = 0.0;
    double err_l2 = 0.0;
    double eps = 0.0;
    int n_mix = 0;
    double cn_hi = 0.0;
    double runtime_s = 0.0;
    double gamma = 0.0;
    bool ok = false;
    std::string tag;  // failure diagnostic, empty on success
    std::vector<double> mixing;  // C_i uppers

    bool positive() const { return ok && lambda_lo > 0.0; }
    bool negative() const { return ok && lambda_hi < 0.0; }
    bool indeterminate() const { return !positive() && !negative(); }
};

struct PointResult {
    SweepRow row;
    std::optional<DensityEnclosure> density;
    std::optional<LyapunovEnclosure> lyapunov;
};

// Full pipeline for one point. A cached matrix is used for the first attempt
// only; a doubled K always assembles afresh. Failures become rows with ok=false.
PointResult evaluate_point(const MapParams& p, const NoiseParams& n, int K, const PointOptions& opts = {},
                           const DeterministicMatrix* cached = nullptr);
SweepRow run_point(const MapParams& p, const NoiseParams& n, int K, const PointOptions& opts = {});

struct Range {
    double lo = 0.0;
    double hi = 0.0;
    int count = 1;

    double value(int i) const;
    // "lo:hi:n" or a single number
    static Range parse(const std::string& s);
};

struct SweepConfig {
    Range alpha{3.0, 3.0, 1};
    Range beta{1.0, 1.0, 1};
    Range sigma{0.2, 0.2, 1};
    int K = 128;
    PointOptions opts{};
    int workers = 0;  // 0: worker_count()
    bool record_runtime = true;
    std::uint64_t seed = 0;  // recorded only; the pipeline is deterministic
    std::function<void(const SweepRow&)> on_row;  // called in grid order
};

// rows in grid order: alpha outermost, sigma innermost
std::vector<SweepRow> sweep(const SweepConfig& cfg);

struct Bracket {
    double sigma1 = 0.0;
    Interval lambda1;
    double sigma2 = 0.0;
    Interval lambda2;
    bool descending = true;  // lambda1 > 0 > lambda2
};

// rows for one (alpha, beta), sorted by sigma
std::vector<Bracket> detect_crossings(const std::vector<SweepRow>& rows);

// groups rows by (alpha, beta) first
struct GroupedBracket {
    double alpha;
    double beta;
    Bracket bracket;
};
std::vector<GroupedBracket> detect_all_crossings(std::vector<SweepRow> rows);

// returns a lambda enclosure at (sigma, K); nullopt if certification failed
using LambdaOracle = std::function<std::optional<Interval>(double sigma, int K)>;

struct RefineResult {
    Bracket bracket;
    bool stalled = false;
    int steps = 0;
    int K = 0;
};

RefineResult refine_crossing(const LambdaOracle& oracle, const Bracket& start, double width_target, int K,
                             int max_K = 512, int max_steps = 200);
RefineResult refine_crossing(double alpha, double beta, const Bracket& start, double width_target, int K,
                             const PointOptions& opts = {});

struct SimulationResult {
    std::vector<double> trajectory;  // X_0..X_steps when requested
    double birkhoff = 0.0;           // mean of log|T'(X_i)|, i < steps
    double std_error = 0.0;          // batch means
    std::uint64_t used = 0;
    std::uint64_t skipped = 0;  // iterates at the critical point
};

// Seeded mt19937_64; normals by Box-Muller from 53-bit uniforms in (0, 1).
// sigma <= 1e-300 switches the noise off.
class NoiseStream {
public:
    NoiseStream(double sigma, std::uint64_t seed);
    double next();

private:
    double sigma_;
    bool off_;
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

SimulationResult simulate(const MapParams& p, const NoiseParams& n, double x0, std::uint64_t steps,
                          std::uint64_t seed, bool keep_trajectory = false);

struct TwoPointResult {
    std::vector<double> circle;  // min(|x-y|, 2-|x-y|)
    std::vector<double> raw;     // |x-y|
};
TwoPointResult two_point(const MapParams& p, const NoiseParams& n, double x0, double y0, std::uint64_t steps,
                         std::uint64_t seed);

// shortest round-trip decimal
std::string format_double(double x);

inline constexpr const char* kCsvHeader =
    "alpha,beta,sigma,modes,lambda_lo,lambda_hi,err_l2,eps,n_mix,cn_hi,runtime_s";

std::string csv_line(const SweepRow& r);
void write_csv(const std::vector<SweepRow>& rows, const std::string& path);
std::vector<SweepRow> read_csv(const std::string& path);

// P6 pixmap, width = count along x, height = sigma count. Row 0 is the
// smallest sigma, column 0 the smallest x. Rows must be in sweep order with x
// outermost.
void write_sign_map(const std::vector<SweepRow>& rows, int nx, int nsigma, const std::string& path);

// plain-text certificate record
std::string certificate_text(const DensityEnclosure& d, const LyapunovEnclosure* l = nullptr);
std::string certificate_text(const SweepRow& r);

struct CertificateRecord {
    double alpha = 0.0, beta = 0.0, sigma = 0.0;
    int K = 0;
    int N = 0;
    std::vector<double> C;
};
std::vector<CertificateRecord> read_certificates(const std::string& path);

// log(C_steps) over the (x, sigma) grid, blue (small) to red (large); records
// lacking C_steps are black. Layout as write_sign_map.
void write_mixing_heatmap(const std::vector<CertificateRecord>& recs, int nx, int nsigma, int steps,
                          const std::string& path);

}  // namespace lyapcert
