// Command-line driver.
#include <omp.h>

#include <cstdio>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "lyapcert/explorer.hpp"

using namespace lyapcert;

namespace {

struct PointArgs {
    double alpha = 3.0;
    double beta = 1.0;
    double sigma = 0.2;
    int modes = 128;
    double target = 0.5;
    int n_max = 64;
};

void add_point_flags(CLI::App* cmd, PointArgs& a) {
    cmd->add_option("--alpha", a.alpha, "shape exponent (>= 1)")->required();
    cmd->add_option("--beta", a.beta, "height parameter in (-1, 1]")->capture_default_str();
    cmd->add_option("--sigma", a.sigma, "noise standard deviation")->required();
    cmd->add_option("--modes", a.modes, "Fourier truncation K")->capture_default_str();
    cmd->add_option("--target", a.target, "mixing target for C_N")->capture_default_str();
    cmd->add_option("--n-max", a.n_max, "maximum mixing steps")->capture_default_str();
}

PointOptions point_options(const PointArgs& a) {
    PointOptions o;
    o.cert.target = a.target;
    o.cert.n_max = a.n_max;
    return o;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot open " + path + " for writing");
    os << text;
    if (!os) throw IoError("write failed for " + path);
}

std::string show(const Interval& x) { return "[" + format_double(x.lo()) + ", " + format_double(x.hi()) + "]"; }

const char* sign_word(const SweepRow& r) {
    if (!r.ok) return "uncertified";
    if (r.positive()) return "positive";
    if (r.negative()) return "negative";
    return "indeterminate";
}

int cmd_lyapunov(const PointArgs& a, const std::string& out) {
    PointResult res = evaluate_point(MapParams{a.alpha, a.beta}, NoiseParams{a.sigma}, a.modes, point_options(a));
    const SweepRow& r = res.row;
    if (!r.ok) {
        std::cerr << "lyapunov: " << r.tag << '\n';
        return 1;
    }
    const LyapunovEnclosure& l = *res.lyapunov;
    std::cout << "lambda " << show(l.lambda) << '\n'
              << "width " << format_double(l.lambda.width()) << '\n'
              << "sign " << sign_word(r) << '\n'
              << "modes " << r.K << '\n'
              << "N " << r.n_mix << "  C_N " << format_double(r.cn_hi) << '\n'
              << "eps " << format_double(r.eps) << "  E " << format_double(r.err_l2) << '\n'
              << "runtime_s " << format_double(r.runtime_s) << '\n';
    if (!out.empty()) write_text(out, certificate_text(*res.density, &l));
    return 0;
}

struct SweepArgs {
    std::string alpha = "3";
    std::string beta = "1";
    std::string sigma;
    int modes = 128;
    std::string out_csv, out_map, out_certs;
    int mixing_steps = 0;
    bool no_timing = false;
    std::uint64_t seed = 0;
};

void add_sweep_flags(CLI::App* cmd, SweepArgs& s) {
    cmd->add_option("--alpha", s.alpha, "alpha value or lo:hi:n")->capture_default_str();
    cmd->add_option("--beta", s.beta, "beta value or lo:hi:n")->capture_default_str();
    cmd->add_option("--sigma", s.sigma, "sigma lo:hi:n")->required();
    cmd->add_option("--modes", s.modes, "Fourier truncation K")->capture_default_str();
}

SweepConfig sweep_config(const SweepArgs& s) {
    SweepConfig cfg;
    cfg.alpha = Range::parse(s.alpha);
    cfg.beta = Range::parse(s.beta);
    cfg.sigma = Range::parse(s.sigma);
    cfg.K = s.modes;
    cfg.record_runtime = !s.no_timing;
    cfg.seed = s.seed;
    cfg.opts.cert.mixing_min_steps = s.mixing_steps;
    return cfg;
}

int cmd_sweep(const SweepArgs& s) {
    SweepConfig cfg = sweep_config(s);
    int nx = 1;
    if (cfg.alpha.count > 1 && cfg.beta.count > 1) {
        if (!s.out_map.empty()) throw DomainError("sweep: --out-map needs at most one of alpha/beta to vary");
    } else {
        nx = cfg.alpha.count > 1 ? cfg.alpha.count : cfg.beta.count;
    }

    std::ofstream csv, certs;
    if (!s.out_csv.empty()) {
        csv.open(s.out_csv);
        if (!csv) throw IoError("cannot open " + s.out_csv + " for writing");
        csv << kCsvHeader << '\n';
    }
    if (!s.out_certs.empty()) {
        certs.open(s.out_certs);
        if (!certs) throw IoError("cannot open " + s.out_certs + " for writing");
    }
    int failed = 0;
    cfg.on_row = [&](const SweepRow& r) {
        if (csv.is_open()) {
            csv << csv_line(r) << '\n' << std::flush;
            if (!csv) throw IoError("write failed for " + s.out_csv);
        }
        if (certs.is_open()) certs << certificate_text(r) << std::flush;
        if (!r.ok) {
            ++failed;
            std::cerr << "sweep: alpha=" << format_double(r.alpha) << " beta=" << format_double(r.beta)
                      << " sigma=" << format_double(r.sigma) << ": " << r.tag << '\n';
        }
    };
    std::vector<SweepRow> rows = sweep(cfg);
    if (!s.out_map.empty()) write_sign_map(rows, nx, cfg.sigma.count, s.out_map);

    int pos = 0, neg = 0, ind = 0;
    for (const auto& r : rows) (r.positive() ? pos : r.negative() ? neg : ind)++;
    std::cout << "points " << rows.size() << "  positive " << pos << "  negative " << neg << "  indeterminate "
              << ind << "  failed " << failed << '\n';
    if (s.out_csv.empty() && s.out_map.empty()) {
        std::cout << kCsvHeader << '\n';
        for (const auto& r : rows) std::cout << csv_line(r) << '\n';
    }
    return failed == 0 ? 0 : 1;
}

int cmd_crossings(const std::string& from_csv, const SweepArgs& s, double refine_width, const std::string& out) {
    std::vector<SweepRow> rows;
    if (!from_csv.empty()) {
        rows = read_csv(from_csv);
    } else {
        if (s.sigma.empty()) throw DomainError("crossings: give --from-csv or an inline grid with --sigma");
        rows = sweep(sweep_config(s));
    }
    bool all_ok = true;
    for (const auto& r : rows) all_ok = all_ok && r.ok;

    std::ostringstream text;
    text << "alpha,beta,sigma1,lambda1_lo,lambda1_hi,sigma2,lambda2_lo,lambda2_hi,orientation,refined,modes\n";
    for (const GroupedBracket& g : detect_all_crossings(rows)) {
        Bracket b = g.bracket;
        std::string refined = "no";
        int K = s.modes;
        if (refine_width > 0) {
            RefineResult rr = refine_crossing(g.alpha, g.beta, b, refine_width, s.modes);
            b = rr.bracket;
            K = rr.K;
            refined = rr.stalled ? "stalled" : "yes";
            all_ok = all_ok && !rr.stalled;
        }
        text << format_double(g.alpha) << ',' << format_double(g.beta) << ',' << format_double(b.sigma1) << ','
             << format_double(b.lambda1.lo()) << ',' << format_double(b.lambda1.hi()) << ','
             << format_double(b.sigma2) << ',' << format_double(b.lambda2.lo()) << ','
             << format_double(b.lambda2.hi()) << ',' << (b.descending ? "pos_to_neg" : "neg_to_pos") << ','
             << refined << ',' << K << '\n';
    }
    std::cout << text.str();
    if (!out.empty()) write_text(out, text.str());
    return all_ok ? 0 : 1;
}

int cmd_density(const PointArgs& a, const std::string& out, const std::string& save_path,
                const std::string& load_matrix_path, const std::string& cert_out) {
    const MapParams p{a.alpha, a.beta};
    const NoiseParams n{a.sigma};
    p.validate();
    n.validate();
    const TestMap map = TestMap::family(p);
    DeterministicMatrix M;
    if (!load_matrix_path.empty()) {
        M = load_matrix(load_matrix_path);
        if (M.map.describe() != map.describe())
            throw DomainError("density: matrix file is for " + M.map.describe() + ", not " + map.describe());
    } else {
        TolProfile tol;
        tol.sigma = a.sigma;
        M = assemble_deterministic(map, a.modes, tol);
    }
    if (!save_path.empty()) save_matrix(M, save_path);
    CertOptions opts;
    opts.target = a.target;
    opts.n_max = a.n_max;
    DensityEnclosure d;
    try {
        d = enclose_density(map, n, M.K, opts, &M);
    } catch (const CertificationError& e) {
        std::cerr << "density: " << e.what() << '\n';
        return 1;
    }
    std::cout << "modes " << d.K << "  N " << d.cert.N << "  C_N " << format_double(d.cert.cn()) << "  eps "
              << format_double(d.eps.hi()) << "  E " << format_double(d.E.hi()) << '\n';
    if (!out.empty()) {
        std::ostringstream os;
        os << "# " << map.describe() << " sigma " << format_double(d.sigma) << " modes " << d.K << " E "
           << format_double(d.E.hi()) << '\n';
        os << "k,re,im\n";
        for (int k = -d.K; k <= d.K; ++k)
            os << k << ',' << format_double(d.g[k].re.mid()) << ',' << format_double(d.g[k].im.mid()) << '\n';
        write_text(out, os.str());
    }
    if (!cert_out.empty()) write_text(cert_out, certificate_text(d));
    return 0;
}

int cmd_simulate(double alpha, double beta, double sigma, double x0, std::optional<double> y0, std::uint64_t steps,
                 std::uint64_t seed, const std::string& out) {
    const MapParams p{alpha, beta};
    const NoiseParams n{sigma};
    if (y0) {
        TwoPointResult tp = two_point(p, n, x0, *y0, steps, seed);
        std::cout << "initial " << format_double(tp.circle.front()) << "  final " << format_double(tp.circle.back())
                  << '\n';
        if (!out.empty()) {
            std::ofstream os(out);
            if (!os) throw IoError("cannot open " + out + " for writing");
            os << "i,circle,raw\n";
            for (std::size_t i = 0; i < tp.circle.size(); ++i)
                os << i << ',' << format_double(tp.circle[i]) << ',' << format_double(tp.raw[i]) << '\n';
            if (!os) throw IoError("write failed for " + out);
        }
        return 0;
    }
    SimulationResult s = simulate(p, n, x0, steps, seed, !out.empty());
    std::cout << "birkhoff " << format_double(s.birkhoff) << "  std_error " << format_double(s.std_error)
              << "  used " << s.used << "  skipped " << s.skipped << '\n';
    if (!out.empty()) {
        std::ofstream os(out);
        if (!os) throw IoError("cannot open " + out + " for writing");
        os << "i,x\n";
        for (std::size_t i = 0; i < s.trajectory.size(); ++i) os << i << ',' << format_double(s.trajectory[i]) << '\n';
        if (!os) throw IoError("write failed for " + out);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Certified Lyapunov exponents of noisy unimodal maps"};
    app.require_subcommand(1);

    PointArgs pa;
    std::string lyap_out;
    auto* lyap = app.add_subcommand("lyapunov", "certified enclosure at one parameter point");
    add_point_flags(lyap, pa);
    lyap->add_option("--out", lyap_out, "certificate record file");

    SweepArgs sa;
    auto* sw = app.add_subcommand("sweep", "grid sweep with one matrix per (alpha, beta)");
    add_sweep_flags(sw, sa);
    sw->add_option("--out-csv", sa.out_csv, "CSV output");
    sw->add_option("--out-map", sa.out_map, "sign map (PPM)");
    sw->add_option("--out-certs", sa.out_certs, "certificate records");
    sw->add_option("--mixing-steps", sa.mixing_steps, "compute C_i at least up to this step");
    sw->add_flag("--no-timing", sa.no_timing, "write runtime_s as 0 (byte-stable output)");
    sw->add_option("--seed", sa.seed, "recorded seed");

    SweepArgs ca;
    std::string from_csv, cross_out;
    double refine_width = 0.0;
    auto* cr = app.add_subcommand("crossings", "sign changes along sigma");
    cr->add_option("--from-csv", from_csv, "sweep CSV to scan");
    cr->add_option("--alpha", ca.alpha, "alpha value or lo:hi:n")->capture_default_str();
    cr->add_option("--beta", ca.beta, "beta value or lo:hi:n")->capture_default_str();
    cr->add_option("--sigma", ca.sigma, "sigma lo:hi:n");
    cr->add_option("--modes", ca.modes, "Fourier truncation K")->capture_default_str();
    cr->add_option("--refine-width", refine_width, "bisect each bracket to this width (0: off)");
    cr->add_option("--out", cross_out, "bracket CSV");

    PointArgs da;
    std::string dens_out, save_m, load_m, dens_cert;
    auto* de = app.add_subcommand("density", "certified stationary density");
    add_point_flags(de, da);
    de->add_option("--out", dens_out, "coefficient file");
    de->add_option("--save-matrix", save_m, "write the deterministic matrix");
    de->add_option("--load-matrix", load_m, "reuse a saved deterministic matrix");
    de->add_option("--certificate", dens_cert, "certificate record file");

    double s_alpha = 3, s_beta = 1, s_sigma = 0.2, x0 = 0.1;
    std::optional<double> y0;
    std::uint64_t steps = 100000, seed = 1;
    std::string sim_out;
    auto* si = app.add_subcommand("simulate", "Monte Carlo orbit and Birkhoff average");
    si->add_option("--alpha", s_alpha, "shape exponent (>= 1)")->required();
    si->add_option("--beta", s_beta, "height parameter in (-1, 1]")->capture_default_str();
    si->add_option("--sigma", s_sigma, "noise standard deviation (<= 1e-300: no noise)")->required();
    si->add_option("--x0", x0, "start point in [-1, 1)")->capture_default_str();
    si->add_option("--y0", y0, "second orbit on the same noise");
    si->add_option("--steps", steps, "iterations")->capture_default_str();
    si->add_option("--seed", seed, "mt19937_64 seed")->capture_default_str();
    si->add_option("--out", sim_out, "trajectory or distance CSV");

    std::string hm_certs, hm_out;
    int hm_nx = 1, hm_ns = 1, hm_steps = 2;
    auto* hm = app.add_subcommand("heatmap", "log C_N over a sweep grid from certificate records");
    hm->add_option("--certs", hm_certs, "certificate records from sweep --out-certs")->required();
    hm->add_option("--nx", hm_nx, "points along alpha or beta")->required();
    hm->add_option("--nsigma", hm_ns, "points along sigma")->required();
    hm->add_option("--steps", hm_steps, "mixing step i of C_i")->capture_default_str();
    hm->add_option("--out", hm_out, "PPM output")->required();

    CLI11_PARSE(app, argc, argv);
    omp_set_num_threads(worker_count());

    try {
        if (*lyap) return cmd_lyapunov(pa, lyap_out);
        if (*sw) return cmd_sweep(sa);
        if (*cr) return cmd_crossings(from_csv, ca, refine_width, cross_out);
        if (*de) return cmd_density(da, dens_out, save_m, load_m, dens_cert);
        if (*si) return cmd_simulate(s_alpha, s_beta, s_sigma, x0, y0, steps, seed, sim_out);
        if (*hm) {
            write_mixing_heatmap(read_certificates(hm_certs), hm_nx, hm_ns, hm_steps, hm_out);
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
