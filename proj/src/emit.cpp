#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "lyapcert/explorer.hpp"

namespace lyapcert {

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

namespace {

double parse_double(const std::string& s, const std::string& ctx) {
    double v = 0.0;
    const char* b = s.data();
    const char* e = b + s.size();
    if (!s.empty() && s[0] == '+') ++b;
    auto res = std::from_chars(b, e, v);
    if (res.ec != std::errc() || res.ptr != e) throw IoError(ctx + ": bad number '" + s + "'");
    return v;
}

int parse_int(const std::string& s, const std::string& ctx) {
    int v = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw IoError(ctx + ": bad integer '" + s + "'");
    return v;
}

std::ofstream open_out(const std::string& path, bool binary = false) {
    std::ofstream os(path, binary ? std::ios::binary : std::ios::out);
    if (!os) throw IoError("cannot open " + path + " for writing");
    return os;
}

}  // namespace

std::string csv_line(const SweepRow& r) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    auto f = [&](double x) { return format_double(r.ok ? x : nan); };
    std::string s;
    s += format_double(r.alpha) + ',' + format_double(r.beta) + ',' + format_double(r.sigma) + ',';
    s += std::to_string(r.K) + ',';
    s += f(r.lambda_lo) + ',' + f(r.lambda_hi) + ',' + f(r.err_l2) + ',' + f(r.eps) + ',';
    s += std::to_string(r.ok ? r.n_mix : 0) + ',' + f(r.cn_hi) + ',' + format_double(r.runtime_s);
    return s;
}

void write_csv(const std::vector<SweepRow>& rows, const std::string& path) {
    auto os = open_out(path);
    os << kCsvHeader << '\n';
    for (const auto& r : rows) os << csv_line(r) << '\n';
    if (!os) throw IoError("write failed for " + path);
}

std::vector<SweepRow> read_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open " + path);
    std::string line;
    if (!std::getline(is, line) || line != kCsvHeader) throw IoError(path + ": missing or unexpected header");
    std::vector<SweepRow> rows;
    for (int lineno = 2; std::getline(is, line); ++lineno) {
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        for (std::string tok; std::getline(ss, tok, ',');) f.push_back(tok);
        const std::string ctx = path + ":" + std::to_string(lineno);
        if (f.size() != 11) throw IoError(ctx + ": expected 11 fields");
        SweepRow r;
        r.alpha = parse_double(f[0], ctx);
        r.beta = parse_double(f[1], ctx);
        r.sigma = parse_double(f[2], ctx);
        r.K = parse_int(f[3], ctx);
        r.lambda_lo = parse_double(f[4], ctx);
        r.lambda_hi = parse_double(f[5], ctx);
        r.err_l2 = parse_double(f[6], ctx);
        r.eps = parse_double(f[7], ctx);
        r.n_mix = parse_int(f[8], ctx);
        r.cn_hi = parse_double(f[9], ctx);
        r.runtime_s = parse_double(f[10], ctx);
        r.ok = std::isfinite(r.lambda_lo) && std::isfinite(r.lambda_hi);
        if (!r.ok) r.tag = "failed";
        rows.push_back(r);
    }
    return rows;
}

namespace {

struct Rgb {
    unsigned char r, g, b;
};

void write_ppm(const std::vector<Rgb>& px, int w, int h, const std::string& path) {
    auto os = open_out(path, true);
    os << "P6\n" << w << ' ' << h << "\n255\n";
    for (const Rgb& c : px) os.put(static_cast<char>(c.r)).put(static_cast<char>(c.g)).put(static_cast<char>(c.b));
    if (!os) throw IoError("write failed for " + path);
}

}  // namespace

void write_sign_map(const std::vector<SweepRow>& rows, int nx, int nsigma, const std::string& path) {
    if (nx < 1 || nsigma < 1 || rows.size() != static_cast<std::size_t>(nx) * static_cast<std::size_t>(nsigma))
        throw DimensionError("write_sign_map: row count does not match the grid");
    std::vector<Rgb> px(rows.size());
    for (int ix = 0; ix < nx; ++ix) {
        for (int is = 0; is < nsigma; ++is) {
            const SweepRow& r = rows[static_cast<std::size_t>(ix) * nsigma + is];
            Rgb c{128, 128, 128};
            if (r.positive()) c = {255, 0, 0};
            if (r.negative()) c = {0, 0, 255};
            px[static_cast<std::size_t>(is) * nx + ix] = c;
        }
    }
    write_ppm(px, nx, nsigma, path);
}

namespace {

std::string record(double alpha, double beta, double sigma, int K, int N, const std::vector<double>& C, double eps,
                   double gamma, double E, const Interval* lambda) {
    std::ostringstream os;
    os << "certificate\n";
    os << "alpha " << format_double(alpha) << '\n';
    os << "beta " << format_double(beta) << '\n';
    os << "sigma " << format_double(sigma) << '\n';
    os << "modes " << K << '\n';
    os << "N " << N << '\n';
    os << "C";
    for (double c : C) os << ' ' << format_double(c);
    os << '\n';
    os << "eps " << format_double(eps) << '\n';
    os << "gamma " << format_double(gamma) << '\n';
    os << "E " << format_double(E) << '\n';
    if (lambda) os << "lambda " << format_double(lambda->lo()) << ' ' << format_double(lambda->hi()) << '\n';
    os << "end\n";
    return os.str();
}

}  // namespace

std::string certificate_text(const DensityEnclosure& d, const LyapunovEnclosure* l) {
    const double alpha = d.map.kind() == TestMap::Kind::family ? d.map.params().alpha : 0.0;
    const double beta = d.map.kind() == TestMap::Kind::family ? d.map.params().beta : 0.0;
    return record(alpha, beta, d.sigma, d.K, d.cert.N, d.cert.C, d.eps.hi(), d.gamma.hi(), d.E.hi(),
                  l ? &l->lambda : nullptr);
}

std::string certificate_text(const SweepRow& r) {
    if (!r.ok) {
        std::ostringstream os;
        os << "certificate\nalpha " << format_double(r.alpha) << "\nbeta " << format_double(r.beta) << "\nsigma "
           << format_double(r.sigma) << "\nmodes " << r.K << "\nfailed " << r.tag << "\nend\n";
        return os.str();
    }
    const Interval lam(r.lambda_lo, r.lambda_hi);
    return record(r.alpha, r.beta, r.sigma, r.K, r.n_mix, r.mixing, r.eps, r.gamma, r.err_l2, &lam);
}

std::vector<CertificateRecord> read_certificates(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open " + path);
    std::vector<CertificateRecord> out;
    std::string line;
    CertificateRecord cur;
    bool open = false;
    for (int lineno = 1; std::getline(is, line); ++lineno) {
        const std::string ctx = path + ":" + std::to_string(lineno);
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        if (key.empty()) continue;
        if (key == "certificate") {
            cur = CertificateRecord{};
            open = true;
            continue;
        }
        if (!open) throw IoError(ctx + ": data outside a certificate record");
        std::string v;
        if (key == "end") {
            out.push_back(cur);
            open = false;
        } else if (key == "alpha" && ls >> v) {
            cur.alpha = parse_double(v, ctx);
        } else if (key == "beta" && ls >> v) {
            cur.beta = parse_double(v, ctx);
        } else if (key == "sigma" && ls >> v) {
            cur.sigma = parse_double(v, ctx);
        } else if (key == "modes" && ls >> v) {
            cur.K = parse_int(v, ctx);
        } else if (key == "N" && ls >> v) {
            cur.N = parse_int(v, ctx);
        } else if (key == "C") {
            while (ls >> v) cur.C.push_back(parse_double(v, ctx));
        }
    }
    if (open) throw IoError(path + ": unterminated certificate record");
    return out;
}

void write_mixing_heatmap(const std::vector<CertificateRecord>& recs, int nx, int nsigma, int steps,
                          const std::string& path) {
    if (nx < 1 || nsigma < 1 || recs.size() != static_cast<std::size_t>(nx) * static_cast<std::size_t>(nsigma))
        throw DimensionError("write_mixing_heatmap: record count does not match the grid");
    if (steps < 1) throw DomainError("write_mixing_heatmap: steps must be >= 1");
    std::vector<double> v(recs.size(), std::numeric_limits<double>::quiet_NaN());
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (std::size_t k = 0; k < recs.size(); ++k) {
        const auto& C = recs[k].C;
        if (C.size() > static_cast<std::size_t>(steps) && C[static_cast<std::size_t>(steps)] > 0) {
            v[k] = std::log(C[static_cast<std::size_t>(steps)]);
            lo = std::min(lo, v[k]);
            hi = std::max(hi, v[k]);
        }
    }
    std::vector<Rgb> px(recs.size());
    for (int ix = 0; ix < nx; ++ix) {
        for (int is = 0; is < nsigma; ++is) {
            double x = v[static_cast<std::size_t>(ix) * nsigma + is];
            Rgb c{0, 0, 0};
            if (!std::isnan(x)) {
                double t = hi > lo ? (x - lo) / (hi - lo) : 0.5;
                c = {static_cast<unsigned char>(std::lround(255 * t)), 0,
                     static_cast<unsigned char>(std::lround(255 * (1 - t)))};
            }
            px[static_cast<std::size_t>(is) * nx + ix] = c;
        }
    }
    write_ppm(px, nx, nsigma, path);
}

}  // namespace lyapcert
