#include "censmix/model.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace censmix {
namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

inline std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
}

// Counter-based stream: word t of seed s is the splitmix64 output at
// state s + golden * (t + 1). Each draw consumes two fixed words.
inline std::uint64_t stream_word(std::uint64_t seed, std::uint64_t index) {
    return mix64(seed + kGolden * (index + 1));
}

inline double to_unit_open(std::uint64_t w) {
    // 53-bit mantissa, strictly inside (0, 1)
    return (static_cast<double>(w >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace

void MixtureModel::validate() const {
    if (k < 1) throw ConfigError("MixtureModel: k must be >= 1");
    if (static_cast<int>(weights.size()) != k || static_cast<int>(means.size()) != k)
        throw ConfigError("MixtureModel: weights/means must have length k");
    double sum = 0.0;
    for (double w : weights) {
        if (!(w > 0)) throw ConfigError("MixtureModel: weights must be positive");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-12) throw ConfigError("MixtureModel: weights must sum to 1");
    if (!(sigma > 0)) throw ConfigError("MixtureModel: sigma must be positive");
    for (double mu : means)
        if (!(std::abs(mu) < mean_bound))
            throw ConfigError("MixtureModel: |mean| must be < mean_bound M");
}

MomentVector mixing_moments(const MixtureModel& m, int j_max) {
    if (j_max < 1) throw ConfigError("mixing_moments: j_max must be >= 1");
    MomentVector out;
    out.order = j_max;
    out.frame = Frame::standardized;
    out.values.assign(static_cast<size_t>(j_max), 0.0);
    for (int i = 0; i < m.k; ++i) {
        const double mu = m.means[static_cast<size_t>(i)] / m.sigma;
        double mu_pow = 1.0;
        for (int j = 1; j <= j_max; ++j) {
            mu_pow *= mu;
            out.values[static_cast<size_t>(j - 1)] += m.weights[static_cast<size_t>(i)] * mu_pow;
        }
    }
    return out;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double alpha_mass(const MixtureModel& m, const CensorWindow& w) {
    double alpha = 0.0;
    for (int i = 0; i < m.k; ++i) {
        const double lo = std::isfinite(w.lower) ? (w.lower - m.means[static_cast<size_t>(i)]) / m.sigma
                                                 : -std::numeric_limits<double>::infinity();
        const double hi = std::isfinite(w.upper) ? (w.upper - m.means[static_cast<size_t>(i)]) / m.sigma
                                                 : std::numeric_limits<double>::infinity();
        alpha += m.weights[static_cast<size_t>(i)] * (normal_cdf(hi) - normal_cdf(lo));
    }
    if (alpha < 1e-12)
        throw DegenerateWindowError("alpha_mass: survival probability below 1e-12; window too narrow");
    return std::min(alpha, 1.0);
}

// Wichura's AS241 (PPND16): double-precision inverse standard normal CDF.
double inverse_normal_cdf(double p) {
    const double q = p - 0.5;
    double r;
    if (std::abs(q) <= 0.425) {
        r = 0.180625 - q * q;
        return q *
               (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
                     6.7265770927008700853e4) * r + 4.5921953931549871457e4) * r +
                   1.3731693765509461125e4) * r + 1.9715909503065514427e3) * r +
                 1.3314166789178437745e2) * r + 3.3871328727963666080e0) /
               (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
                     3.9307895800092710610e4) * r + 2.1213794301586595867e4) * r +
                   5.3941960214247511077e3) * r + 6.8718700749205790830e2) * r +
                 4.2313330701600911252e1) * r + 1.0);
    }
    r = q < 0 ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double val;
    if (r <= 5.0) {
        r -= 1.6;
        val = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                    2.41780725177450611770e-1) * r + 1.27045825245236838258e0) * r +
                  3.64784832476320460504e0) * r + 5.76949722146069140550e0) * r +
                4.63033784615654529590e0) * r + 1.42343711074968357734e0) /
              (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                    1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
                  6.89767334985100004550e-1) * r + 1.67638483018380384940e0) * r +
                2.05319162663775882187e0) * r + 1.0);
    } else {
        r -= 5.0;
        val = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                    1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
                  2.96560571828504891230e-1) * r + 1.78482653991729133580e0) * r +
                5.46378491116411436990e0) * r + 6.65790464350110377720e0) /
              (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                    1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
                  1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
                5.99832206555887937690e-1) * r + 1.0);
    }
    return q < 0 ? -val : val;
}

SampleBatch sample(const MixtureModel& m, const CensorWindow& w, std::int64_t n,
                   std::uint64_t seed) {
    if (n < 1) throw ConfigError("sample: n must be >= 1");
    m.validate();
    std::vector<double> cumulative(static_cast<size_t>(m.k));
    double acc = 0.0;
    for (int i = 0; i < m.k; ++i) {
        acc += m.weights[static_cast<size_t>(i)];
        cumulative[static_cast<size_t>(i)] = acc;
    }
    cumulative.back() = 1.0;

    SampleBatch batch;
    batch.n_total = n;
    batch.seed = seed;
    batch.values.reserve(static_cast<size_t>(n));
    for (std::int64_t s = 0; s < n; ++s) {
        const double u_comp = to_unit_open(stream_word(seed, 2 * static_cast<std::uint64_t>(s)));
        const double u_norm = to_unit_open(stream_word(seed, 2 * static_cast<std::uint64_t>(s) + 1));
        int comp = 0;
        while (u_comp > cumulative[static_cast<size_t>(comp)]) ++comp;
        const double z = inverse_normal_cdf(u_norm);
        const double x = m.means[static_cast<size_t>(comp)] + m.sigma * z;
        if (w.contains(x)) batch.values.push_back(x);
    }
    return batch;
}

double exact_censored_expectation(const MixtureModel& m, const CensorWindow& w,
                                  const HermitePoly& p) {
    if (std::abs(m.sigma - 1.0) > 1e-15)
        throw ConfigError("exact_censored_expectation: model must be standardized (sigma = 1)");
    std::vector<BigFloat> coeffs(p.monomial_coeffs.size());
    for (size_t i = 0; i < coeffs.size(); ++i) coeffs[i] = BigFloat(p.monomial_coeffs[i]);
    return censored_poly_expectation<BigFloat>(m.weights, m.means, w, coeffs)
        .convert_to<double>();
}

void write_batch(const std::string& path, const SampleBatch& batch, double R, double sigma) {
    std::ofstream out(path);
    if (!out) throw ConfigError("write_batch: cannot open " + path);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", R);
    out << "# n_total=" << batch.n_total << " seed=" << batch.seed << " R=" << buf;
    std::snprintf(buf, sizeof buf, "%.17g", sigma);
    out << " sigma=" << buf << "\n";
    for (double v : batch.values) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out << buf << "\n";
    }
    for (std::int64_t i = 0; i < batch.n_failed(); ++i) out << "FAIL\n";
}

BatchFile read_batch(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("read_batch: cannot open " + path);
    std::string header;
    if (!std::getline(in, header) || header.rfind("# ", 0) != 0)
        throw ConfigError("read_batch: missing header line in " + path);
    BatchFile file;
    std::int64_t n_total = -1;
    {
        std::istringstream hs(header.substr(2));
        std::string tok;
        while (hs >> tok) {
            const auto eq = tok.find('=');
            if (eq == std::string::npos) continue;
            const std::string key = tok.substr(0, eq);
            const std::string val = tok.substr(eq + 1);
            if (key == "n_total") n_total = std::stoll(val);
            else if (key == "seed") file.batch.seed = std::stoull(val);
            else if (key == "R") file.R = std::stod(val);
            else if (key == "sigma") file.sigma = std::stod(val);
        }
    }
    if (n_total < 0) throw ConfigError("read_batch: header missing n_total in " + path);
    std::int64_t fails = 0;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line == "FAIL") {
            ++fails;
        } else {
            file.batch.values.push_back(std::stod(line));
        }
    }
    file.batch.n_total = n_total;
    if (file.batch.n_observed() + fails != n_total)
        throw ConfigError("read_batch: record count does not match n_total in " + path);
    return file;
}

}  // namespace censmix
