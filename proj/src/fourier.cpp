#include "lyapcert/fourier.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

namespace lyapcert {

FourierVector FourierVector::uniform_density(int K) {
    FourierVector v(K);
    v[0] = ComplexInterval(0.5, 0.0);
    return v;
}

double l2_norm_upper(const FourierVector& v) {
    double s = 0.0;
    for (const auto& c : v.coeffs) {
        double m = c.mag();
        s = rnd::add_up(s, rnd::mul_up(m, m));
    }
    return rnd::sqrt_up(rnd::mul_up(2.0, s));
}

std::vector<Interval> gaussian_multiplier(const NoiseParams& n, int K) {
    n.validate();
    if (K < 0) throw DomainError("gaussian_multiplier: K must be >= 0");
    const Interval c = sqr(Interval(n.sigma)) * sqr(pi()) / 2.0;
    std::vector<Interval> D(static_cast<std::size_t>(2 * K + 1));
    for (int k = 0; k <= K; ++k) {
        Interval d = k == 0 ? Interval(1.0) : exp(-(c * static_cast<double>(k) * static_cast<double>(k)));
        D[static_cast<std::size_t>(K + k)] = d;
        D[static_cast<std::size_t>(K - k)] = d;
    }
    return D;
}

Interval tail_gamma(const NoiseParams& n, int K) {
    n.validate();
    if (K < 1) throw DomainError("tail_gamma: K must be >= 1");
    Interval s(n.sigma);
    Interval expo = -(sqr(s) * sqr(pi()) * (static_cast<double>(K) * static_cast<double>(K)) / 2.0) -
                    log(s * sqrt(2.0 * pi()));
    return exp(expo);
}

DiscretizedOperator compose(const std::vector<Interval>& D, const DeterministicMatrix& M,
                            const Interval& gamma, double sigma) {
    const std::size_t dim = static_cast<std::size_t>(2 * M.K + 1);
    if (D.size() != dim || M.M.rows() != dim) throw DimensionError("compose: mode counts differ");
    DiscretizedOperator out;
    out.K = M.K;
    out.sigma = sigma;
    out.gamma = gamma;
    out.A = IntervalMatrix(dim, dim);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) out.A(i, j) = D[i] * M.M(i, j);
    return out;
}

DiscretizedOperator discretize(const DeterministicMatrix& M, const NoiseParams& n) {
    return compose(gaussian_multiplier(n, M.K), M, tail_gamma(n, M.K), n.sigma);
}

FourierVector apply(const DiscretizedOperator& A, const FourierVector& v) {
    if (v.K != A.K) throw DimensionError("apply: mode counts differ");
    FourierVector out(A.K);
    kernels::interval_matvec_omp(A.A, v.coeffs, out.coeffs);
    return out;
}

namespace {

constexpr const char* kMagic = "lyapcert-matrix 1";

void put_le(std::ostream& os, double x) {
    auto bits = std::bit_cast<std::uint64_t>(x);
    if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
    os.write(reinterpret_cast<const char*>(&bits), sizeof bits);
}

double get_le(std::istream& is) {
    std::uint64_t bits = 0;
    is.read(reinterpret_cast<char*>(&bits), sizeof bits);
    if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
    return std::bit_cast<double>(bits);
}

const char* kind_name(TestMap::Kind k) {
    switch (k) {
        case TestMap::Kind::family:
            return "family";
        case TestMap::Kind::identity:
            return "identity";
        case TestMap::Kind::constant:
            return "constant";
        case TestMap::Kind::tent:
            return "tent";
    }
    return "?";
}

}  // namespace

void save_matrix(const DeterministicMatrix& M, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open " + path + " for writing");
    std::ostringstream h;
    h.precision(17);
    h << kMagic << '\n'
      << "modes " << M.K << '\n'
      << "map " << kind_name(M.map.kind()) << ' ' << M.map.params().alpha << ' ' << M.map.params().beta << ' '
      << M.map.constant_value() << '\n'
      << "quadrature_rows " << M.report.quadrature_rows << '\n'
      << "layout re_lo re_hi im_lo im_hi row-major binary64-le\n"
      << "end\n";
    os << h.str();
    const auto& d = M.M.data();
    for (const auto& z : d) put_le(os, z.re.lo());
    for (const auto& z : d) put_le(os, z.re.hi());
    for (const auto& z : d) put_le(os, z.im.lo());
    for (const auto& z : d) put_le(os, z.im.hi());
    if (!os) throw IoError("write failed for " + path);
}

DeterministicMatrix load_matrix(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open " + path);
    std::string line;
    std::getline(is, line);
    if (line != kMagic) throw IoError(path + ": not a matrix dump");
    DeterministicMatrix M;
    std::string kind;
    double alpha = 0, beta = 0, c = 0;
    while (std::getline(is, line) && line != "end") {
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        if (key == "modes")
            ls >> M.K;
        else if (key == "map")
            ls >> kind >> alpha >> beta >> c;
        else if (key == "quadrature_rows")
            ls >> M.report.quadrature_rows;
    }
    if (line != "end" || M.K < 1) throw IoError(path + ": malformed header");
    if (kind == "family")
        M.map = TestMap::family(MapParams{alpha, beta});
    else if (kind == "identity")
        M.map = TestMap::identity();
    else if (kind == "constant")
        M.map = TestMap::constant(c);
    else if (kind == "tent")
        M.map = TestMap::tent();
    else
        throw IoError(path + ": unknown map kind '" + kind + "'");
    const std::size_t dim = static_cast<std::size_t>(2 * M.K + 1);
    M.M = IntervalMatrix(dim, dim);
    std::vector<double> v(4 * dim * dim);
    for (double& x : v) x = get_le(is);
    if (!is) throw IoError(path + ": truncated data");
    const std::size_t n = dim * dim;
    for (std::size_t k = 0; k < n; ++k)
        M.M(k / dim, k % dim) = ComplexInterval(Interval(v[k], v[n + k]), Interval(v[2 * n + k], v[3 * n + k]));
    return M;
}

}  // namespace lyapcert
