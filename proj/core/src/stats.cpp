#include "epr/stats.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "csv_detail.hpp"

namespace epr {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kDegPerRad = 180.0 / kPi;

const char* const kCsvHeader = "theta_a_deg,theta_b_deg,duration_s,count,n_hh,n_vv";

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::int64_t poisson_draw(std::mt19937_64& rng, double mean) {
    if (mean <= 0.0) return 0;
    std::poisson_distribution<std::int64_t> dist(mean);
    return dist(rng);
}

std::string angles_deg(const AnalyzerSetting& s) {
    std::ostringstream out;
    out << "(" << s.theta_a * kDegPerRad << ", " << s.theta_b * kDegPerRad << ") deg";
    return out.str();
}

// One record index per setting; missing, duplicate and unmatched settings are
// collected into a single DataError.
std::vector<std::size_t> match_records(const std::vector<CountRecord>& records,
                                       const std::vector<AnalyzerSetting>& settings) {
    std::vector<std::size_t> chosen(settings.size());
    std::vector<bool> claimed(records.size(), false);
    std::ostringstream problems;
    bool bad = false;

    for (std::size_t i = 0; i < settings.size(); ++i) {
        std::size_t hits = 0;
        for (std::size_t r = 0; r < records.size(); ++r) {
            const AnalyzerSetting rec_setting{records[r].theta_a, records[r].theta_b};
            if (settings_match(rec_setting, settings[i], kAngleMatchTol)) {
                ++hits;
                chosen[i] = r;
                claimed[r] = true;
            }
        }
        if (hits == 0) {
            problems << (bad ? "; " : "") << "missing setting " << angles_deg(settings[i]);
            bad = true;
        } else if (hits > 1) {
            problems << (bad ? "; " : "") << hits << " records for setting "
                     << angles_deg(settings[i]);
            bad = true;
        }
    }
    for (std::size_t r = 0; r < records.size(); ++r) {
        if (!claimed[r]) {
            problems << (bad ? "; " : "") << "unmatched record at "
                     << angles_deg({records[r].theta_a, records[r].theta_b});
            bad = true;
        }
    }
    if (bad) {
        throw DataError("setting coverage: " + problems.str());
    }
    return chosen;
}

}  // namespace

void ExperimentConfig::validate() const {
    if (!(pair_rate >= 0.0) || !std::isfinite(pair_rate)) {
        throw InvalidInput("experiment config: pair_rate must be >= 0");
    }
    if (!(duration >= 0.0) || !std::isfinite(duration)) {
        throw InvalidInput("experiment config: duration must be >= 0");
    }
    if (!(dqe_a >= 0.0 && dqe_a <= 1.0) || !(dqe_b >= 0.0 && dqe_b <= 1.0)) {
        throw InvalidInput("experiment config: efficiencies must lie in [0, 1]");
    }
    if (!(accidental_rate >= 0.0) || !std::isfinite(accidental_rate)) {
        throw InvalidInput("experiment config: accidental_rate must be >= 0");
    }
}

std::uint64_t sub_seed(std::uint64_t seed, std::size_t setting_index) {
    return splitmix64(seed ^ (0x9E3779B97F4A7C15ULL *
                              (static_cast<std::uint64_t>(setting_index) + 1)));
}

std::vector<CountRecord> simulate_counts(const DensityMatrix& rho,
                                         const std::vector<AnalyzerSetting>& settings,
                                         const ExperimentConfig& cfg) {
    cfg.validate();
    const double scale = cfg.pair_rate * cfg.duration * cfg.dqe_a * cfg.dqe_b;
    const double accidentals = cfg.accidental_rate * cfg.duration;
    const double mu_hh = scale * joint_prob(rho, {0.0, 0.0}) + accidentals;
    const double mu_vv = scale * joint_prob(rho, {0.5 * kPi, 0.5 * kPi}) + accidentals;

    std::vector<CountRecord> records;
    records.reserve(settings.size());
    for (std::size_t i = 0; i < settings.size(); ++i) {
        std::mt19937_64 rng(sub_seed(cfg.seed, i));
        const double mu = scale * joint_prob(rho, settings[i]) + accidentals;
        CountRecord rec;
        rec.theta_a = settings[i].theta_a;
        rec.theta_b = settings[i].theta_b;
        rec.duration = cfg.duration;
        rec.count = poisson_draw(rng, mu);
        rec.n_hh = poisson_draw(rng, mu_hh);
        rec.n_vv = poisson_draw(rng, mu_vv);
        records.push_back(rec);
    }
    return records;
}

Uncertain estimate_probability(const CountRecord& rec, double accidental_rate) {
    if (rec.count < 0 || rec.n_hh < 0 || rec.n_vv < 0) {
        throw InvalidInput("count record: counts must be nonnegative");
    }
    const double raw_n = static_cast<double>(rec.count);
    const double raw_d = static_cast<double>(rec.n_hh) + static_cast<double>(rec.n_vv);
    const double accidentals = accidental_rate * rec.duration;
    const double n = std::max(0.0, raw_n - accidentals);
    const double d = std::max(0.0, static_cast<double>(rec.n_hh) - accidentals) +
                     std::max(0.0, static_cast<double>(rec.n_vv) - accidentals);
    if (d <= 0.0) {
        throw DataError("probability estimate: zero normalization (n_hh + n_vv)");
    }
    const double p = n / d;
    double sigma;
    if (n <= 0.0) {
        sigma = 1.0 / d;
    } else {
        // First-order propagation; variances are those of the raw counts.
        sigma = std::sqrt(raw_n / (d * d) + raw_d * n * n / (d * d * d * d));
    }
    return Uncertain{p, sigma};
}

Uncertain bootstrap_probability(const CountRecord& rec, int resamples,
                                std::uint64_t seed) {
    if (resamples < 2) {
        throw InvalidInput("bootstrap: need at least 2 resamples");
    }
    const Uncertain point = estimate_probability(rec);
    std::mt19937_64 rng(splitmix64(seed));
    double sum = 0.0, sum_sq = 0.0;
    int used = 0;
    for (int i = 0; i < resamples; ++i) {
        const double n = static_cast<double>(poisson_draw(rng, static_cast<double>(rec.count)));
        const double d = static_cast<double>(poisson_draw(rng, static_cast<double>(rec.n_hh))) +
                         static_cast<double>(poisson_draw(rng, static_cast<double>(rec.n_vv)));
        if (d <= 0.0) continue;
        const double p = n / d;
        sum += p;
        sum_sq += p * p;
        ++used;
    }
    if (used < 2) {
        throw DataError("bootstrap: all resamples had zero normalization");
    }
    const double mean = sum / used;
    const double var = std::max(0.0, (sum_sq - used * mean * mean) / (used - 1));
    return Uncertain{point.value, std::sqrt(var)};
}

LadderAnalysis analyze_ladder(const std::vector<CountRecord>& records,
                              const LadderSpec& spec, double accidental_rate) {
    const auto settings = ladder_settings(spec);
    const auto chosen = match_records(records, settings);

    LadderAnalysis analysis;
    analysis.p_k = estimate_probability(records[chosen[0]], accidental_rate);
    double sum = 0.0, var = 0.0;
    analysis.terms.reserve(settings.size() - 1);
    for (std::size_t i = 1; i < settings.size(); ++i) {
        const Uncertain term = estimate_probability(records[chosen[i]], accidental_rate);
        analysis.terms.push_back(term);
        sum += term.value;
        var += term.sigma * term.sigma;
    }
    analysis.script_p = Uncertain{sum, std::sqrt(var)};
    analysis.margin = analysis.p_k.value - analysis.script_p.value;
    analysis.sigma_violation = violation_sigma(analysis.p_k, analysis.script_p);
    return analysis;
}

std::vector<AnalyzerSetting> chsh_outcome_settings(const CHSHSettings& s) {
    CHSHSettings::make(s.a, s.a_prime, s.b, s.b_prime);
    const std::array<std::pair<double, double>, 4> pairs = {{
        {s.a, s.b},
        {s.a, s.b_prime},
        {s.a_prime, s.b},
        {s.a_prime, s.b_prime},
    }};
    std::vector<AnalyzerSetting> settings;
    settings.reserve(16);
    for (const auto& [x, y] : pairs) {
        settings.push_back({x, y});
        settings.push_back({x, perp(y)});
        settings.push_back({perp(x), y});
        settings.push_back({perp(x), perp(y)});
    }
    return settings;
}

ChshAnalysis analyze_chsh(const std::vector<CountRecord>& records,
                          const CHSHSettings& settings) {
    const auto outcome_settings = chsh_outcome_settings(settings);
    const auto chosen = match_records(records, outcome_settings);

    ChshAnalysis analysis;
    for (std::size_t block = 0; block < 4; ++block) {
        const double n_pp = static_cast<double>(records[chosen[4 * block + 0]].count);
        const double n_pb = static_cast<double>(records[chosen[4 * block + 1]].count);
        const double n_bp = static_cast<double>(records[chosen[4 * block + 2]].count);
        const double n_bb = static_cast<double>(records[chosen[4 * block + 3]].count);
        const double total = n_pp + n_pb + n_bp + n_bb;
        if (total <= 0.0) {
            throw DataError("CHSH analysis: no counts for setting " +
                            angles_deg(outcome_settings[4 * block]));
        }
        const double e = (n_pp - n_pb - n_bp + n_bb) / total;
        const double var = ((1.0 - e) * (1.0 - e) * (n_pp + n_bb) +
                            (1.0 + e) * (1.0 + e) * (n_pb + n_bp)) /
                           (total * total);
        analysis.correlations[block] = Uncertain{e, std::sqrt(var)};
    }
    const auto& c = analysis.correlations;
    const double s_value = std::abs(c[0].value - c[1].value) + std::abs(c[2].value + c[3].value);
    const double s_var = c[0].sigma * c[0].sigma + c[1].sigma * c[1].sigma +
                         c[2].sigma * c[2].sigma + c[3].sigma * c[3].sigma;
    if (!(s_var > 0.0)) {
        throw DataError("CHSH analysis: zero propagated uncertainty "
                        "(every outcome table is exactly correlated)");
    }
    analysis.s = Uncertain{s_value, std::sqrt(s_var)};
    analysis.sigma_violation = sigma_violation(analysis.s);
    return analysis;
}

std::vector<CountRecord> ingest_csv(const std::filesystem::path& path) {
    auto lines = detail::read_lines(path);
    // Tolerate a UTF-8 byte-order mark on the first line.
    if (!lines.empty() && lines[0].text.rfind("\xEF\xBB\xBF", 0) == 0) {
        lines[0].text.erase(0, 3);
    }
    if (lines.empty() || lines[0].text != kCsvHeader) {
        throw DataError(path.string() + ": first line must be the header '" +
                        std::string(kCsvHeader) + "'");
    }

    std::vector<CountRecord> records;
    for (std::size_t li = 1; li < lines.size(); ++li) {
        const auto& [number, text] = lines[li];
        if (text.empty()) continue;
        const auto fields = detail::split_fields(text);
        std::ostringstream where;
        where << path.string() << ": line " << number;
        if (fields.size() != 6) {
            throw DataError(where.str() + ": expected 6 columns, got " +
                            std::to_string(fields.size()));
        }
        double theta_a_deg, theta_b_deg, duration;
        if (!detail::parse_double(fields[0], theta_a_deg) ||
            !detail::parse_double(fields[1], theta_b_deg) ||
            !detail::parse_double(fields[2], duration)) {
            throw DataError(where.str() + ": malformed angle or duration field");
        }
        if (!(duration >= 0.0)) {
            throw DataError(where.str() + ": duration must be >= 0");
        }
        long long count, n_hh, n_vv;
        if (!detail::parse_count(fields[3], count) ||
            !detail::parse_count(fields[4], n_hh) ||
            !detail::parse_count(fields[5], n_vv)) {
            throw DataError(where.str() + ": counts must be integers");
        }
        if (count < 0 || n_hh < 0 || n_vv < 0) {
            throw DataError(where.str() + ": counts must be nonnegative");
        }
        CountRecord rec;
        rec.theta_a = theta_a_deg / kDegPerRad;
        rec.theta_b = theta_b_deg / kDegPerRad;
        rec.duration = duration;
        rec.count = count;
        rec.n_hh = n_hh;
        rec.n_vv = n_vv;
        records.push_back(rec);
    }
    if (records.empty()) {
        throw DataError(path.string() + ": empty dataset (header but no rows)");
    }
    return records;
}

void write_counts_csv(const std::filesystem::path& path,
                      const std::vector<CountRecord>& records) {
    std::ofstream out(path);
    if (!out) {
        throw DataError("cannot open file for writing: " + path.string());
    }
    out << kCsvHeader << "\n";
    out.precision(12);
    for (const auto& rec : records) {
        out << rec.theta_a * kDegPerRad << "," << rec.theta_b * kDegPerRad << ","
            << rec.duration << "," << rec.count << "," << rec.n_hh << "," << rec.n_vv
            << "\n";
    }
    if (!out) {
        throw DataError("failed writing: " + path.string());
    }
}

}  // namespace epr
