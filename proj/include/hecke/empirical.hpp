#pragma once

// Hecke-eigenvalue datasets and truncated Dirichlet-series diagnostics.
//
// Finite data cannot reach s -> 1+, so everything here is a heuristic
// comparison: normalised sums at a few s > 1 against the limiting constants.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <fstream>
#include <istream>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "density_optimizer.hpp"
#include "moment_constants.hpp"

namespace hecke {

struct EigenvalueRecord {
    std::int64_t norm = 2;
    std::complex<double> a;
    /// angle of omega_v, radians
    std::optional<double> mu;
};

struct DatasetMeta {
    std::string label;
    std::optional<int> char_order;
    std::string excluded_note;
};

struct EigenvalueDataset {
    std::vector<EigenvalueRecord> records;
    DatasetMeta meta;
    std::vector<std::string> warnings;
};

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

enum class DataFormat { csv, json };

/// 2 Nv^{7/64}
inline double ramanujan_sanity_bound(std::int64_t norm) { return 2.0 * std::pow(static_cast<double>(norm), 7.0 / 64.0); }

/// Sorts by norm (stable, so equal norms keep input order), rejects norm < 2
/// and records a warning for every eigenvalue above the sanity bound.
inline EigenvalueDataset make_dataset(std::vector<EigenvalueRecord> records, DatasetMeta meta = {}) {
    EigenvalueDataset ds;
    ds.meta = std::move(meta);
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& rec = records[i];
        if (rec.norm < 2) throw std::invalid_argument("record " + std::to_string(i) + ": norm must be >= 2");
        const double bound = ramanujan_sanity_bound(rec.norm);
        if (std::abs(rec.a) > bound) {
            std::ostringstream os;
            os << "record " << i << " (norm " << rec.norm << "): |a| = " << std::abs(rec.a)
               << " exceeds 2*Nv^(7/64) = " << bound;
            ds.warnings.push_back(os.str());
        }
    }
    std::stable_sort(records.begin(), records.end(),
                     [](const EigenvalueRecord& x, const EigenvalueRecord& y) { return x.norm < y.norm; });
    ds.records = std::move(records);
    return ds;
}

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

template <class T>
T parse_number(const std::string& cell, std::size_t line, const char* column) {
    std::istringstream is(cell);
    T v{};
    is >> v;
    if (cell.empty() || is.fail() || !is.eof()) throw ParseError(line, std::string("bad value for ") + column + ": '" + cell + "'");
    return v;
}

}  // namespace detail

/// Header row naming at least norm, re, im (any order); optional mu.
inline EigenvalueDataset parse_csv(std::istream& in) {
    std::string line;
    std::size_t lineno = 0;
    std::vector<std::string> header;
    while (header.empty() && std::getline(in, line)) {
        ++lineno;
        if (!detail::trim(line).empty()) header = detail::split_csv(detail::trim(line));
    }
    if (header.empty()) return make_dataset({});

    auto column = [&](const std::string& name) -> std::optional<std::size_t> {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return i;
        return std::nullopt;
    };
    const auto c_norm = column("norm");
    const auto c_re = column("re");
    const auto c_im = column("im");
    const auto c_mu = column("mu");
    if (!c_norm || !c_re || !c_im) throw ParseError(lineno, "header must contain norm, re, im");

    std::vector<EigenvalueRecord> records;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = detail::trim(line);
        if (t.empty() || t.front() == '#') continue;
        const auto cells = detail::split_csv(t);
        if (cells.size() != header.size())
            throw ParseError(lineno, "expected " + std::to_string(header.size()) + " columns, got " +
                                         std::to_string(cells.size()));
        EigenvalueRecord rec;
        rec.norm = detail::parse_number<std::int64_t>(cells[*c_norm], lineno, "norm");
        if (rec.norm < 2) throw ParseError(lineno, "norm must be >= 2");
        rec.a = {detail::parse_number<double>(cells[*c_re], lineno, "re"),
                 detail::parse_number<double>(cells[*c_im], lineno, "im")};
        if (c_mu && !cells[*c_mu].empty()) rec.mu = detail::parse_number<double>(cells[*c_mu], lineno, "mu");
        records.push_back(rec);
    }
    return make_dataset(std::move(records));
}

/// Either a bare array of {norm, re, im, mu?} or {"meta": {...}, "records": [...]}.
inline EigenvalueDataset parse_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        std::size_t line = 1;
        for (std::size_t i = 0; i < std::min<std::size_t>(e.byte, text.size()); ++i)
            if (text[i] == '\n') ++line;
        throw ParseError(line, e.what());
    }
    DatasetMeta meta;
    const nlohmann::json* arr = &doc;
    if (doc.is_object()) {
        if (doc.contains("meta")) {
            const auto& m = doc["meta"];
            meta.label = m.value("label", "");
            if (m.contains("r") && !m["r"].is_null()) meta.char_order = m["r"].get<int>();
            meta.excluded_note = m.value("excluded", "");
        }
        if (!doc.contains("records")) throw ParseError(1, "object form needs a 'records' array");
        arr = &doc["records"];
    }
    if (!arr->is_array()) throw ParseError(1, "expected an array of records");

    std::vector<EigenvalueRecord> records;
    std::size_t idx = 0;
    for (const auto& item : *arr) {
        ++idx;
        try {
            EigenvalueRecord rec;
            rec.norm = item.at("norm").get<std::int64_t>();
            rec.a = {item.at("re").get<double>(), item.at("im").get<double>()};
            if (item.contains("mu") && !item["mu"].is_null()) rec.mu = item["mu"].get<double>();
            if (rec.norm < 2) throw ParseError(idx, "norm must be >= 2");
            records.push_back(rec);
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(idx, std::string("record ") + std::to_string(idx) + ": " + e.what());
        }
    }
    return make_dataset(std::move(records), meta);
}

inline EigenvalueDataset load_dataset(const std::string& path, DataFormat format) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    if (format == DataFormat::csv) {
        auto ds = parse_csv(in);
        ds.meta.label = path;
        return ds;
    }
    std::stringstream buf;
    buf << in.rdbuf();
    auto ds = parse_json(buf.str());
    if (ds.meta.label.empty()) ds.meta.label = path;
    return ds;
}

inline DataFormat format_from_path(const std::string& path) {
    const auto dot = path.rfind('.');
    if (dot != std::string::npos && path.substr(dot) == ".json") return DataFormat::json;
    return DataFormat::csv;
}

inline EigenvalueDataset load_dataset(const std::string& path) { return load_dataset(path, format_from_path(path)); }

inline nlohmann::ordered_json to_json(const EigenvalueDataset& ds) {
    nlohmann::ordered_json out;
    out["meta"] = {{"label", ds.meta.label},
                   {"r", ds.meta.char_order ? nlohmann::ordered_json(*ds.meta.char_order) : nlohmann::ordered_json()},
                   {"excluded", ds.meta.excluded_note}};
    auto& recs = out["records"] = nlohmann::ordered_json::array();
    for (const auto& r : ds.records) {
        nlohmann::ordered_json j{{"norm", r.norm}, {"re", r.a.real()}, {"im", r.a.imag()}};
        if (r.mu) j["mu"] = *r.mu;
        recs.push_back(std::move(j));
    }
    return out;
}

inline void write_csv(std::ostream& os, const EigenvalueDataset& ds) {
    os << "norm,re,im,mu\n";
    os.precision(17);
    for (const auto& r : ds.records) {
        os << r.norm << ',' << r.a.real() << ',' << r.a.imag() << ',';
        if (r.mu) os << *r.mu;
        os << '\n';
    }
}

// ---------------------------------------------------------------------------
// Estimators

/// log(1/(s-1))
inline double ell(double s) {
    if (!(s > 1.0)) throw std::domain_error("ell: s must exceed 1");
    return std::log(1.0 / (s - 1.0));
}

/// Fixed-shape pairwise summation: the result depends only on the input
/// order, never on scheduling.
inline double pairwise_sum(const double* x, std::size_t n) {
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += x[i];
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(x, half) + pairwise_sum(x + half, n - half);
}

inline double pairwise_sum(const std::vector<double>& x) { return pairwise_sum(x.data(), x.size()); }

struct MomentEstimate {
    double raw = 0;
    double normalized = 0;
};

/// sum Re(a e^{i phi})^k Nv^{-s}, and the same divided by log(1/(s-1)).
inline MomentEstimate truncated_moment(const EigenvalueDataset& ds, int k, double phi, double s) {
    if (k < 0) throw std::domain_error("truncated_moment: k must be nonnegative");
    const double norm_factor = ell(s);
    const std::complex<double> rot = std::polar(1.0, phi);
    std::vector<double> terms;
    terms.reserve(ds.records.size());
    for (const auto& r : ds.records)
        terms.push_back(std::pow((r.a * rot).real(), k) * std::pow(static_cast<double>(r.norm), -s));
    const double raw = pairwise_sum(terms);
    return {raw, raw / norm_factor};
}

/// Argument of a in [0, 2 pi).
inline double argument(std::complex<double> a) { return canonical_angle(std::arg(a)); }

/// Normalised Dirichlet mass of {arg a in (center - half, center + half),
/// |a| >= min_abs}.  a = 0 has no argument and is never counted; half >= pi
/// means the whole circle.
inline double sector_density(const EigenvalueDataset& ds, double center, double half_angle, double min_abs, double s) {
    if (!(half_angle > 0.0)) throw std::domain_error("sector_density: half-angle must be positive");
    const double norm_factor = ell(s);
    const bool full = half_angle >= std::numbers::pi;
    std::vector<double> terms;
    for (const auto& r : ds.records) {
        if (r.a == std::complex<double>(0.0, 0.0)) continue;
        if (std::abs(r.a) < min_abs) continue;
        if (!full && !(std::abs(wrap_angle(std::arg(r.a) - center)) < half_angle)) continue;
        terms.push_back(std::pow(static_cast<double>(r.norm), -s));
    }
    return pairwise_sum(terms) / norm_factor;
}

/// Normalised Dirichlet mass of {Re(a e^{-i phi}) > threshold}.
inline double halfplane_density(const EigenvalueDataset& ds, double phi, double threshold, double s) {
    const double norm_factor = ell(s);
    const std::complex<double> rot = std::polar(1.0, -phi);
    std::vector<double> terms;
    for (const auto& r : ds.records)
        if ((r.a * rot).real() > threshold) terms.push_back(std::pow(static_cast<double>(r.norm), -s));
    return pairwise_sum(terms) / norm_factor;
}

/// Normalised Dirichlet mass of {|a| > q}.
inline double large_abs_density(const EigenvalueDataset& ds, double q, double s) {
    const double norm_factor = ell(s);
    std::vector<double> terms;
    for (const auto& r : ds.records)
        if (std::abs(r.a) > q) terms.push_back(std::pow(static_cast<double>(r.norm), -s));
    return pairwise_sum(terms) / norm_factor;
}

// ---------------------------------------------------------------------------
// Synthetic data

inline std::vector<std::int64_t> first_primes(std::size_t count) {
    std::vector<std::int64_t> out;
    if (count == 0) return out;
    std::size_t limit = 64;
    while (true) {
        std::vector<bool> composite(limit + 1, false);
        out.clear();
        for (std::size_t p = 2; p <= limit && out.size() < count; ++p) {
            if (composite[p]) continue;
            out.push_back(static_cast<std::int64_t>(p));
            for (std::size_t q = p * p; q <= limit; q += p) composite[q] = true;
        }
        if (out.size() == count) return out;
        limit *= 2;
    }
}

/// rays: arguments uniform on {k pi / r}.  symmetric_rays: the same, but
/// consecutive primes carry a and -a, so odd moments cancel pairwise.
enum class SynthModel { rays, symmetric_rays, uniform_angle };

/// Deterministic for a given seed on every platform: mt19937_64 output is
/// specified by the standard, and doubles are built from its top 53 bits.
inline EigenvalueDataset synth_dataset(std::uint64_t seed, SynthModel model, std::size_t count, int r = 0) {
    const bool on_rays = model != SynthModel::uniform_angle;
    if (on_rays && r < 1) throw std::domain_error("synth_dataset: rays model needs r >= 1");
    std::mt19937_64 rng(seed);
    auto unit = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };

    std::vector<EigenvalueRecord> records;
    records.reserve(count);
    for (std::int64_t p : first_primes(count)) {
        EigenvalueRecord rec;
        rec.norm = p;
        if (model == SynthModel::symmetric_rays && records.size() % 2 == 1) {
            rec.a = -records.back().a;
            rec.mu = records.back().mu;
            records.push_back(rec);
            continue;
        }
        double angle = 0.0;
        if (on_rays) {
            const auto k = static_cast<int>(rng() % static_cast<std::uint64_t>(2 * r));
            angle = k * std::numbers::pi / r;
            rec.mu = canonical_angle(2.0 * angle);
        } else {
            angle = 2.0 * std::numbers::pi * unit();
        }
        const double mag = 2.0 * unit();
        rec.a = std::polar(mag, angle);
        records.push_back(rec);
    }
    DatasetMeta meta;
    const char* name = model == SynthModel::rays             ? "synthetic-rays"
                       : model == SynthModel::symmetric_rays ? "synthetic-symmetric-rays"
                                                             : "synthetic-uniform";
    meta.label = std::string(name) + "-seed" + std::to_string(seed);
    if (on_rays) meta.char_order = r;
    return make_dataset(std::move(records), meta);
}

// ---------------------------------------------------------------------------
// Comparison against the limiting constants

struct MomentRow {
    double s = 0;
    int k = 0;
    double normalized = 0;
    double target = 0;
    BoundKind kind = BoundKind::equality;
    double slack = 0;
    bool flagged = false;
};

struct DensityRow {
    double s = 0;
    std::string set;
    double density = 0;
    double reference = 0;
    /// "upper": theory bounds the density above; "lower": theory predicts at least `reference`
    std::string relation;
    double slack = 0;
    bool flagged = false;
};

struct CompareReport {
    int r = 0;
    double phi = 0;
    std::size_t records = 0;
    std::vector<MomentRow> moments;
    std::vector<DensityRow> densities;
};

struct CompareOptions {
    double phi = 0.0;
    /// the O(1) term is modelled as slack_constant / log(1/(s-1))
    double slack_constant = 1.0;
    PipelineConfig pipeline;
};

inline std::vector<double> default_s_values() { return {1.1, 1.01, 1.001}; }

/// Upper-bound rows (k = 6, 8 and |a| > Q) are flagged when the data exceed
/// bound + slack.  Equality targets and lower bounds are reported only.
inline CompareReport compare_report(const EigenvalueDataset& ds, int r, const std::vector<double>& s_values,
                                    const CompareOptions& opt = {}) {
    const MomentBounds mb = moment_bounds(r);
    const SectorResult sector = theorem_pipeline(r, opt.pipeline);
    const double q_cap = min_Q_for_cap(opt.pipeline.cap);
    const double t_phi = threshold_at(sector, opt.phi, opt.pipeline);

    CompareReport rep;
    rep.r = r;
    rep.phi = opt.phi;
    rep.records = ds.records.size();
    if (ds.records.empty()) return rep;
    for (double s : s_values) {
        const double slack = opt.slack_constant / ell(s);
        struct Target {
            int k;
            double value;
            BoundKind kind;
        };
        const Target targets[] = {{3, 0.0, BoundKind::equality},
                                  {4, mb.q4(opt.phi), BoundKind::equality},
                                  {6, mb.q6_upper.get_d(), BoundKind::upper},
                                  {8, mb.q8_upper.get_d(), BoundKind::upper}};
        for (const auto& t : targets) {
            MomentRow row;
            row.s = s;
            row.k = t.k;
            row.normalized = truncated_moment(ds, t.k, opt.phi, s).normalized;
            row.target = t.value;
            row.kind = t.kind;
            row.slack = slack;
            row.flagged = t.kind == BoundKind::upper && row.normalized > t.value + slack;
            rep.moments.push_back(row);
        }

        DensityRow big;
        big.s = s;
        big.set = "|a| > " + std::to_string(q_cap);
        big.density = large_abs_density(ds, q_cap, s);
        big.reference = opt.pipeline.cap;
        big.relation = "upper";
        big.slack = slack;
        big.flagged = big.density > big.reference + slack;
        rep.densities.push_back(big);

        DensityRow hp;
        hp.s = s;
        hp.set = "Re(a e^{-iφ}) > " + std::to_string(t_phi);
        hp.density = halfplane_density(ds, opt.phi, t_phi, s);
        hp.reference = sector.cap;
        hp.relation = "lower";
        hp.slack = slack;
        rep.densities.push_back(hp);

        DensityRow sec;
        sec.s = s;
        sec.set = "sector φ±" + std::to_string(sector.half_angle) + ", |a| >= " + std::to_string(t_phi);
        sec.density = sector_density(ds, opt.phi, sector.half_angle, t_phi, s);
        sec.reference = sector.cap;
        sec.relation = "lower";
        sec.slack = slack;
        rep.densities.push_back(sec);
    }
    return rep;
}

}  // namespace hecke
