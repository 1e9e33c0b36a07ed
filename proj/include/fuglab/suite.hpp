#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "fuglab/constructions.hpp"
#include "fuglab/intertwine.hpp"
#include "fuglab/io.hpp"
#include "fuglab/matrix.hpp"
#include "fuglab/version.hpp"

namespace fuglab {

enum class SuiteKind {
    theorem21,
    flip,
    fuglede,
    putnam,
    transport,
    norm_identity,
    selfadjoint_product,
    prop25,
    jordan,
    oracle_dims,
    all
};

inline constexpr SuiteKind individual_suites[] = {
    SuiteKind::theorem21, SuiteKind::flip,    SuiteKind::fuglede,
    SuiteKind::putnam,    SuiteKind::transport, SuiteKind::norm_identity,
    SuiteKind::selfadjoint_product, SuiteKind::prop25, SuiteKind::jordan,
    SuiteKind::oracle_dims};

inline std::string_view to_string(SuiteKind k) {
    switch (k) {
        case SuiteKind::theorem21: return "theorem21";
        case SuiteKind::flip: return "flip";
        case SuiteKind::fuglede: return "fuglede";
        case SuiteKind::putnam: return "putnam";
        case SuiteKind::transport: return "transport";
        case SuiteKind::norm_identity: return "norm_identity";
        case SuiteKind::selfadjoint_product: return "selfadjoint_product";
        case SuiteKind::prop25: return "prop25";
        case SuiteKind::jordan: return "jordan";
        case SuiteKind::oracle_dims: return "oracle_dims";
        case SuiteKind::all: return "all";
    }
    return "?";
}

inline SuiteKind suite_from_string(std::string_view s) {
    for (SuiteKind k : individual_suites) {
        if (s == to_string(k)) return k;
    }
    if (s == "all") return SuiteKind::all;
    throw ConfigError("unknown suite: " + std::string(s));
}

/// Campaign configuration. Per-instance seeds derive deterministically from
/// the suite seed, so the whole report replays from one integer.
struct SuiteConfig {
    SuiteKind suite = SuiteKind::all;
    int trials = 100;
    int max_dim = 12;
    int max_distinct_eigs = 6;
    std::uint64_t seed = 20240901ULL;
    double hypothesis_tol = 1e-8;
    double conclusion_tol = 1e-7;
    double rank_tol = default_rank_tol;
    std::optional<double> cluster_tol;  // per-matrix default when unset
    std::vector<std::pair<SpectrumFunction, SpectrumFunction>> functions;  // theorem21 pool override
    std::optional<CMatrix> fixture;  // replaces the random base matrix where supported
    std::string fixture_path;

    CheckTolerances tolerances() const { return CheckTolerances{hypothesis_tol, conclusion_tol}; }
};

inline void validate(const SuiteConfig& c) {
    if (c.trials < 1) throw ConfigError("trials must be a positive integer");
    if (c.max_dim < 1) throw ConfigError("max_dim must be a positive integer");
    if (c.max_distinct_eigs < 1) throw ConfigError("max_distinct_eigs must be a positive integer");
    if (c.max_distinct_eigs > c.max_dim) {
        throw ConfigError("max_distinct_eigs must not exceed max_dim");
    }
    if (c.hypothesis_tol <= 0 || c.conclusion_tol <= 0 || c.rank_tol <= 0) {
        throw ConfigError("tolerances must be positive");
    }
    if (c.cluster_tol && *c.cluster_tol <= 0) throw ConfigError("cluster_tol must be positive");
    if (c.fixture) {
        const SuiteKind k = c.suite;
        if (k == SuiteKind::jordan || k == SuiteKind::selfadjoint_product || k == SuiteKind::all) {
            throw ConfigError("suite " + std::string(to_string(k)) +
                              " builds its own instances; --fixture is not supported");
        }
    }
}

/// Whole-campaign result: config echo, per-instance reports, verdict
/// summary.
struct SuiteReport {
    SuiteConfig config;
    std::vector<ImplicationReport> instances;
    int pass = 0;
    int fail = 0;
    int vacuous = 0;
    double wall_time_seconds = 0.0;
    std::string version_string;

    /// FAILs are expected from the jordan suite and from nowhere else; a
    /// jordan instance that does not FAIL is equally unexpected.
    int unexpected() const {
        int count = 0;
        for (const auto& r : instances) {
            const bool expect_fail = (r.check == "jordan");
            if (expect_fail != (r.verdict == Verdict::fail)) ++count;
        }
        return count;
    }
};

namespace campaign {

/// A distinct-eigenvalue list with multiplicities summing to the requested
/// dimension. Forced values come first and are kept verbatim.
struct SpectrumSpec {
    std::vector<Complex> eigenvalues;
    std::vector<Index> multiplicities;
};

inline constexpr double min_eigenvalue_separation = 0.05;

inline Complex random_disk_point(std::mt19937_64& engine) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    const double re = dist(engine);
    const double im = dist(engine);
    return Complex(re, im);
}

inline SpectrumSpec random_spectrum(Index n, Index max_distinct, std::mt19937_64& engine,
                                    std::vector<Complex> forced = {}) {
    SpectrumSpec spec;
    spec.eigenvalues = std::move(forced);
    Index k = 1 + static_cast<Index>(engine() % static_cast<std::uint64_t>(max_distinct));
    k = std::max<Index>(k, static_cast<Index>(spec.eigenvalues.size()));
    k = std::min<Index>(k, n);
    while (static_cast<Index>(spec.eigenvalues.size()) < k) {
        Complex candidate = random_disk_point(engine);
        bool ok = true;
        for (Complex existing : spec.eigenvalues) {
            if (std::abs(candidate - existing) < min_eigenvalue_separation) {
                ok = false;
                break;
            }
        }
        if (ok) spec.eigenvalues.push_back(candidate);
    }
    spec.multiplicities.assign(spec.eigenvalues.size(), 1);
    for (Index extra = n - static_cast<Index>(spec.eigenvalues.size()); extra > 0; --extra) {
        spec.multiplicities[engine() % spec.multiplicities.size()] += 1;
    }
    return spec;
}

inline Index random_dim(int max_dim, std::mt19937_64& engine) {
    if (max_dim < 2) return 1;
    return 2 + static_cast<Index>(engine() % static_cast<std::uint64_t>(max_dim - 1));
}

/// (f, g) drawn from {conjugate, square, identity, random cubic with
/// unit-disk coefficients}, plus an eigenvalue the generated spectrum must
/// contain so that sigma(B) meets sigma(f(B)) and the intertwiner space is
/// nontrivial.
struct FunctionDraw {
    SpectrumFunction f;
    SpectrumFunction g;
    std::vector<Complex> forced_eigenvalues;
};

inline SpectrumFunction random_pool_function(std::mt19937_64& engine,
                                             std::vector<Complex>* forced) {
    switch (engine() % 4) {
        case 0:
            if (forced) {
                std::uniform_real_distribution<double> dist(-1.0, 1.0);
                forced->push_back(Complex(dist(engine), 0.0));
            }
            return SpectrumFunction::builtin(BuiltinFunction::conjugate);
        case 1:
            if (forced) forced->push_back(Complex(1.0, 0.0));
            return SpectrumFunction::builtin(BuiltinFunction::square);
        case 2:
            return SpectrumFunction::builtin(BuiltinFunction::identity);
        default: {
            std::vector<Complex> coeffs(4);
            for (auto& c : coeffs) {
                Complex z = random_disk_point(engine);
                while (std::abs(z) > 1.0) z = random_disk_point(engine);
                c = z;
            }
            if (forced) {
                // Pin a fixed point by adjusting the constant term so that
                // p(z0) = z0. With |z0| <= 0.3 the adjusted term stays
                // inside the unit disk: |c0| <= 0.3 * (1 + 1 + 0.3 + 0.09).
                Complex z0 = random_disk_point(engine);
                while (std::abs(z0) > 1.0) z0 = random_disk_point(engine);
                z0 *= 0.3;
                coeffs[0] = z0 - (coeffs[1] * z0 + coeffs[2] * z0 * z0 + coeffs[3] * z0 * z0 * z0);
                forced->push_back(z0);
            }
            return SpectrumFunction::polynomial(std::move(coeffs));
        }
    }
}

inline FunctionDraw draw_function_pair(const SuiteConfig& config, int trial,
                                       std::mt19937_64& engine) {
    if (!config.functions.empty()) {
        const auto& pair = config.functions[static_cast<std::size_t>(trial) %
                                            config.functions.size()];
        return FunctionDraw{pair.first, pair.second, {}};
    }
    std::vector<Complex> forced;
    SpectrumFunction f = random_pool_function(engine, &forced);
    SpectrumFunction g = random_pool_function(engine, nullptr);
    return FunctionDraw{std::move(f), std::move(g), std::move(forced)};
}

inline CMatrix instance_normal(const SuiteConfig& config, std::mt19937_64& engine,
                               std::uint64_t seed, std::vector<Complex> forced = {}) {
    if (config.fixture) return *config.fixture;
    const Index n = random_dim(config.max_dim, engine);
    const SpectrumSpec spec =
        random_spectrum(n, config.max_distinct_eigs, engine, std::move(forced));
    return random_normal_with_spectrum(spec.eigenvalues, spec.multiplicities,
                                       derive_seed(seed, 0xA1));
}

/// Normal pair sharing part of the spectrum, so the intertwiner space
/// between them is usually nontrivial. Same size when square_pair is set.
inline std::pair<CMatrix, CMatrix> instance_normal_pair(const SuiteConfig& config,
                                                        std::mt19937_64& engine,
                                                        std::uint64_t seed, bool square_pair) {
    if (config.fixture) return {*config.fixture, *config.fixture};
    const Index n = random_dim(config.max_dim, engine);
    const Index m = square_pair ? n : random_dim(config.max_dim, engine);
    const SpectrumSpec left = random_spectrum(n, config.max_distinct_eigs, engine);

    std::vector<Complex> shared;
    for (Complex lambda : left.eigenvalues) {
        if (engine() % 2 == 0) shared.push_back(lambda);
    }
    if (shared.empty()) shared.push_back(left.eigenvalues.front());
    if (static_cast<Index>(shared.size()) > m) shared.resize(static_cast<std::size_t>(m));
    const SpectrumSpec right = random_spectrum(m, config.max_distinct_eigs, engine, shared);

    return {random_normal_with_spectrum(left.eigenvalues, left.multiplicities,
                                        derive_seed(seed, 0xB1)),
            random_normal_with_spectrum(right.eigenvalues, right.multiplicities,
                                        derive_seed(seed, 0xB2))};
}

/// Normal B and Hermitian T with B T Hermitian by construction: paired
/// conjugate phases on the B side against an arrow pattern on the T side,
/// conjugated by a common random unitary.
inline std::pair<CMatrix, CMatrix> hermitian_product_pair(const SuiteConfig& config,
                                                          std::mt19937_64& engine,
                                                          std::uint64_t seed) {
    const Index n = std::max<Index>(2, random_dim(config.max_dim, engine));
    CMatrix b = CMatrix::Zero(n, n);
    CMatrix t = CMatrix::Zero(n, n);
    std::uniform_real_distribution<double> angle(0.0, 3.141592653589793);
    std::normal_distribution<double> real_gauss(0.0, 1.0);
    Index i = 0;
    for (; i + 1 < n; i += 2) {
        const double theta = angle(engine);
        b(i, i) = std::polar(1.0, theta);
        b(i + 1, i + 1) = std::polar(1.0, -theta);
        const Complex a = gaussian_complex(engine);
        t(i, i + 1) = a;
        t(i + 1, i) = std::conj(a);
    }
    if (i < n) {
        b(i, i) = (engine() % 2 == 0) ? 1.0 : -1.0;
        t(i, i) = real_gauss(engine);
    }
    const CMatrix w = random_unitary(n, derive_seed(seed, 0xC1));
    return {w * b * w.adjoint(), w * t * w.adjoint()};
}

}  // namespace campaign

namespace detail {

inline ImplicationReport run_instance(SuiteKind kind, const SuiteConfig& config, int trial,
                                      std::uint64_t seed) {
    std::mt19937_64 engine = make_engine(seed);
    const CheckTolerances tols = config.tolerances();

    switch (kind) {
        case SuiteKind::theorem21: {
            campaign::FunctionDraw draw = campaign::draw_function_pair(config, trial, engine);
            const CMatrix b =
                campaign::instance_normal(config, engine, seed, draw.forced_eigenvalues);
            const SpectralDecomp d = config.cluster_tol ? decompose(b, *config.cluster_tol)
                                                        : decompose(b);
            const CMatrix fb = apply_function(d, draw.f);
            const IntertwinerSpace space = intertwiner_space(b, fb, config.rank_tol);
            const CMatrix a = random_space_element(space, engine);
            return theorem_check(b, draw.f, draw.g, a, tols, config.cluster_tol.value_or(0.0));
        }
        case SuiteKind::flip: {
            // a real eigenvalue guarantees sigma(B) meets sigma(B*)
            std::uniform_real_distribution<double> real_axis(-1.0, 1.0);
            std::vector<Complex> forced{Complex(real_axis(engine), 0.0)};
            const CMatrix b = campaign::instance_normal(config, engine, seed, std::move(forced));
            const IntertwinerSpace space =
                intertwiner_space(b, CMatrix(b.adjoint()), config.rank_tol);
            const CMatrix a = random_space_element(space, engine);
            return flip_check(b, a, tols);
        }
        case SuiteKind::fuglede: {
            const CMatrix b = campaign::instance_normal(config, engine, seed);
            const IntertwinerSpace space = intertwiner_space(b, b, config.rank_tol);
            const CMatrix a = random_space_element(space, engine);
            return fuglede_check(b, a, tols);
        }
        case SuiteKind::putnam:
        case SuiteKind::transport: {
            auto [b, c] = campaign::instance_normal_pair(config, engine, seed,
                                                         /*square_pair=*/false);
            const IntertwinerSpace space = intertwiner_space(b, c, config.rank_tol);
            const CMatrix a = random_space_element(space, engine);
            return kind == SuiteKind::putnam ? putnam_check(b, c, a, tols)
                                             : adjoint_transport_check(b, c, a, tols);
        }
        case SuiteKind::norm_identity: {
            const CMatrix b = campaign::instance_normal(config, engine, seed);
            const CMatrix t = gaussian_matrix(b.rows(), b.rows(), engine);
            const NormIdentityReport rep = norm_identity_check(b, t);
            CheckTolerances scale{normal_gate, 1e-9 * b.norm() * t.norm()};
            ImplicationReport r = classify_implication("norm_identity", normality_residual(b),
                                                       rep.max_discrepancy, scale, t);
            return r;
        }
        case SuiteKind::selfadjoint_product: {
            auto [b, t] = campaign::hermitian_product_pair(config, engine, seed);
            return selfadjoint_product_check(b, t, 1e-8, tols);
        }
        case SuiteKind::prop25: {
            CMatrix u;
            if (config.fixture) {
                u = *config.fixture;
            } else {
                const Index n = campaign::random_dim(config.max_dim, engine);
                u = random_unitary(n, derive_seed(seed, 0xD1));
            }
            const IntertwinerSpace commutant = intertwiner_space(u, u, config.rank_tol);
            const CMatrix a = random_space_element(commutant, engine);
            const BlockPair pair = prop25_pair(u, a);
            ImplicationReport r = flip_check(pair.big_b, pair.big_a, tols);
            r.check = "prop25";
            return r;
        }
        case SuiteKind::jordan: {
            const int span = std::max(1, std::min(config.max_dim, 6) - 1);
            const Index n = 2 + (trial % span);
            const BlockPair pair = jordan_witness(n);
            ImplicationReport r = fuglede_check(pair.big_b, pair.big_a, tols);
            r.check = "jordan";
            return r;
        }
        case SuiteKind::oracle_dims: {
            auto [l, r] = campaign::instance_normal_pair(config, engine, seed,
                                                         /*square_pair=*/false);
            const SpectralDecomp dl = config.cluster_tol ? decompose(l, *config.cluster_tol)
                                                         : decompose(l);
            const SpectralDecomp dr = config.cluster_tol ? decompose(r, *config.cluster_tol)
                                                         : decompose(r);
            const std::size_t solver = intertwiner_space(l, r, config.rank_tol).dimension();
            const std::size_t oracle = expected_dimension(dl, dr);
            const double diff = std::abs(static_cast<double>(solver) - static_cast<double>(oracle));
            CheckTolerances exact{config.hypothesis_tol, 0.5};
            return classify_implication("oracle_dims", 0.0, diff, exact, l);
        }
        case SuiteKind::all:
            break;
    }
    throw ConfigError("run_instance: 'all' must be expanded by run_suite");
}

inline std::string make_instance_id(SuiteKind kind, int trial, std::uint64_t seed) {
    std::ostringstream id;
    id << to_string(kind) << '-' << std::setw(5) << std::setfill('0') << trial << "-s" << std::hex
       << seed;
    return id.str();
}

}  // namespace detail

/// Runs a campaign. Deterministic for a fixed config: per-instance seeds
/// depend only on the suite seed, the suite ordinal, and the trial index, so
/// trials could run in any order (or in parallel) without changing the
/// report.
inline SuiteReport run_suite(const SuiteConfig& config) {
    validate(config);
    const auto start = std::chrono::steady_clock::now();

    SuiteReport report;
    report.config = config;
    report.version_string = std::string(version);

    std::vector<SuiteKind> kinds;
    if (config.suite == SuiteKind::all) {
        kinds.assign(std::begin(individual_suites), std::end(individual_suites));
    } else {
        kinds.push_back(config.suite);
    }

    for (const SuiteKind kind : kinds) {
        // Keyed by the suite kind itself, so a suite produces the same
        // instances whether it runs alone or as part of `all`.
        const std::uint64_t suite_ordinal = static_cast<std::uint64_t>(kind);
        for (int trial = 0; trial < config.trials; ++trial) {
            const std::uint64_t instance_seed =
                derive_seed(config.seed, (suite_ordinal << 32) | static_cast<std::uint64_t>(trial));
            ImplicationReport r = detail::run_instance(kind, config, trial, instance_seed);
            r.instance_id = detail::make_instance_id(kind, trial, instance_seed);
            switch (r.verdict) {
                case Verdict::pass: ++report.pass; break;
                case Verdict::fail: ++report.fail; break;
                case Verdict::vacuous: ++report.vacuous; break;
            }
            report.instances.push_back(std::move(r));
        }
    }

    report.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

inline json suite_config_to_json(const SuiteConfig& c) {
    json j{{"suite", std::string(to_string(c.suite))},
           {"trials", c.trials},
           {"max_dim", c.max_dim},
           {"max_distinct_eigs", c.max_distinct_eigs},
           {"seed", c.seed},
           {"hypothesis_tol", c.hypothesis_tol},
           {"conclusion_tol", c.conclusion_tol},
           {"rank_tol", c.rank_tol}};
    j["cluster_tol"] = c.cluster_tol ? json(*c.cluster_tol) : json(nullptr);
    if (!c.fixture_path.empty()) j["fixture"] = c.fixture_path;
    if (!c.functions.empty()) {
        json pool = json::array();
        for (const auto& [f, g] : c.functions) {
            pool.push_back(json::array({function_to_json(f), function_to_json(g)}));
        }
        j["functions"] = std::move(pool);
    }
    return j;
}

inline json report_to_json(const SuiteReport& report) {
    json instances = json::array();
    for (const auto& r : report.instances) instances.push_back(implication_to_json(r));
    return json{{"schema_version", 1},
                {"version", report.version_string},
                {"config", suite_config_to_json(report.config)},
                {"summary", json{{"pass", report.pass}, {"fail", report.fail},
                                 {"vacuous", report.vacuous}}},
                {"wall_time_seconds", report.wall_time_seconds},
                {"instances", std::move(instances)}};
}

/// Rebuilds the comparable parts of a report from its JSON form (the
/// fixture matrix and function pool are echoed, not reloaded).
inline SuiteReport report_from_json(const json& j) {
    return detail::parse_guard("suite report", [&]() -> SuiteReport {
        if (!j.contains("schema_version") || j.at("schema_version").get<int>() != 1) {
            throw IoError("unsupported report schema version");
        }
        SuiteReport report;
        report.version_string = j.at("version").get<std::string>();
        const json& cfg = j.at("config");
        report.config.suite = suite_from_string(cfg.at("suite").get<std::string>());
        report.config.trials = cfg.at("trials").get<int>();
        report.config.max_dim = cfg.at("max_dim").get<int>();
        report.config.max_distinct_eigs = cfg.at("max_distinct_eigs").get<int>();
        report.config.seed = cfg.at("seed").get<std::uint64_t>();
        report.config.hypothesis_tol = cfg.at("hypothesis_tol").get<double>();
        report.config.conclusion_tol = cfg.at("conclusion_tol").get<double>();
        report.config.rank_tol = cfg.at("rank_tol").get<double>();
        if (!cfg.at("cluster_tol").is_null()) {
            report.config.cluster_tol = cfg.at("cluster_tol").get<double>();
        }
        report.pass = j.at("summary").at("pass").get<int>();
        report.fail = j.at("summary").at("fail").get<int>();
        report.vacuous = j.at("summary").at("vacuous").get<int>();
        report.wall_time_seconds = j.at("wall_time_seconds").get<double>();
        for (const auto& e : j.at("instances")) {
            report.instances.push_back(implication_from_json(e));
        }
        return report;
    });
}

/// Content equality modulo wall time.
inline bool same_report_content(const SuiteReport& a, const SuiteReport& b) {
    if (a.version_string != b.version_string || a.pass != b.pass || a.fail != b.fail ||
        a.vacuous != b.vacuous || a.instances.size() != b.instances.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.instances.size(); ++i) {
        const auto& x = a.instances[i];
        const auto& y = b.instances[i];
        if (x.instance_id != y.instance_id || x.check != y.check ||
            x.hypothesis_residual != y.hypothesis_residual ||
            x.conclusion_residual != y.conclusion_residual ||
            x.hypothesis_tol != y.hypothesis_tol || x.conclusion_tol != y.conclusion_tol ||
            x.verdict != y.verdict || x.witness.has_value() != y.witness.has_value()) {
            return false;
        }
        if (x.witness && *x.witness != *y.witness) return false;
    }
    return true;
}

enum class ReportFormat { json_format, csv };

inline ReportFormat format_from_string(std::string_view s) {
    if (s == "json") return ReportFormat::json_format;
    if (s == "csv") return ReportFormat::csv;
    throw ConfigError("unknown report format: " + std::string(s));
}

/// Writes the report: JSON carries everything, CSV one row per instance.
inline void emit_report(const SuiteReport& report, ReportFormat format,
                        const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open report file for writing: " + path.string());
    if (format == ReportFormat::json_format) {
        out << report_to_json(report).dump(2) << '\n';
    } else {
        out << "instance_id,check,hypothesis_residual,conclusion_residual,verdict\n";
        out << std::setprecision(17);
        for (const auto& r : report.instances) {
            out << r.instance_id << ',' << r.check << ',' << r.hypothesis_residual << ','
                << r.conclusion_residual << ',' << to_string(r.verdict) << '\n';
        }
    }
    if (!out) throw IoError("failed while writing report file: " + path.string());
}

/// Tolerance overrides from a JSON file; every field optional. Reachable
/// from the CLI through an environment variable naming the file.
inline void apply_tolerance_file(SuiteConfig& config, const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open tolerance file: " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw IoError("cannot parse tolerance file " + path.string() + ": " + e.what());
    }
    detail::parse_guard("tolerance file", [&] {
        if (j.contains("hypothesis_tol")) {
            config.hypothesis_tol = j.at("hypothesis_tol").get<double>();
        }
        if (j.contains("conclusion_tol")) {
            config.conclusion_tol = j.at("conclusion_tol").get<double>();
        }
        if (j.contains("rank_tol")) config.rank_tol = j.at("rank_tol").get<double>();
        if (j.contains("cluster_tol")) config.cluster_tol = j.at("cluster_tol").get<double>();
    });
}

}  // namespace fuglab
