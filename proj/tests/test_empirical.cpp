#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "hecke/empirical.hpp"

using namespace hecke;

namespace {

constexpr double pi = std::numbers::pi;

EigenvalueDataset fixture() {
    // arguments well away from every multiple of pi/8
    std::vector<EigenvalueRecord> recs;
    const auto primes = first_primes(40);
    for (std::size_t i = 0; i < primes.size(); ++i) {
        const double angle = (static_cast<double>(i % 16) + 0.37) * pi / 8;
        const double mag = 0.3 + 0.04 * static_cast<double>(i);
        recs.push_back({primes[i], std::polar(mag, angle), std::nullopt});
    }
    return make_dataset(recs);
}

EigenvalueDataset rotate(const EigenvalueDataset& ds, double theta) {
    auto out = ds;
    for (auto& r : out.records) r.a *= std::polar(1.0, theta);
    return out;
}

int argmax_center(const EigenvalueDataset& ds, int grid, double half, double s) {
    int best = 0;
    double best_v = -1;
    for (int j = 0; j < grid; ++j) {
        const double v = sector_density(ds, 2 * pi * j / grid, half, 0.0, s);
        if (v > best_v) {
            best_v = v;
            best = j;
        }
    }
    return best;
}

}  // namespace

TEST(Empirical, Primes) {
    const auto p = first_primes(10);
    EXPECT_EQ(p, (std::vector<std::int64_t>{2, 3, 5, 7, 11, 13, 17, 19, 23, 29}));
    EXPECT_EQ(first_primes(1000).back(), 7919);
}

TEST(Empirical, RaysLieOnLines) {
    for (int r : {2, 3, 5, 7}) {
      for (auto model : {SynthModel::rays, SynthModel::symmetric_rays}) {
        const auto ds = synth_dataset(42, model, 500, r);
        ASSERT_EQ(ds.records.size(), 500u);
        for (const auto& rec : ds.records) {
            if (rec.a == 0.0) continue;
            const double x = argument(rec.a) / (pi / r);
            EXPECT_NEAR(x, std::round(x), 1e-12 / (pi / r));
            ASSERT_TRUE(rec.mu.has_value());
            EXPECT_NEAR(std::cos(*rec.mu), std::cos(2 * std::arg(rec.a)), 1e-12);
        }
        EXPECT_EQ(ds.meta.char_order, r);
      }
    }
}

TEST(Empirical, SymmetricPairsCancel) {
    const auto ds = synth_dataset(9, SynthModel::symmetric_rays, 100, 5);
    for (std::size_t i = 0; i + 1 < ds.records.size(); i += 2) EXPECT_EQ(ds.records[i + 1].a, -ds.records[i].a);
}

TEST(Empirical, SynthDeterministic) {
    const auto a = synth_dataset(7, SynthModel::uniform_angle, 300);
    const auto b = synth_dataset(7, SynthModel::uniform_angle, 300);
    const auto c = synth_dataset(8, SynthModel::uniform_angle, 300);
    EXPECT_EQ(to_json(a).dump(), to_json(b).dump());
    EXPECT_NE(to_json(a).dump(), to_json(c).dump());
    EXPECT_THROW(synth_dataset(1, SynthModel::rays, 10, 0), std::domain_error);
}

TEST(Empirical, ThirdMomentShrinks) {
    const std::vector<double> s_values{1.1, 1.01, 1.001};
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto ds = synth_dataset(seed, SynthModel::symmetric_rays, 2000, 3);
        double prev = std::numeric_limits<double>::infinity();
        double prev_env = std::numeric_limits<double>::infinity();
        for (double s : s_values) {
            const double v = std::abs(truncated_moment(ds, 3, 0.0, s).normalized);
            EXPECT_LT(v, prev) << "seed " << seed << " s " << s;
            prev = v;
            // envelope sum |Re a|^3 p^-s / l(s)
            double env = 0;
            for (const auto& rec : ds.records) env += std::pow(std::abs(rec.a.real()), 3) * std::pow(rec.norm, -s);
            env /= ell(s);
            EXPECT_LT(env, prev_env);
            EXPECT_LE(v, env + 1e-15);
            prev_env = env;
        }
    }
}

TEST(Empirical, MomentDefinition) {
    const auto ds = fixture();
    const double phi = 0.4, s = 1.05;
    double raw = 0;
    for (const auto& rec : ds.records)
        raw += std::pow((rec.a * std::polar(1.0, phi)).real(), 4) * std::pow(static_cast<double>(rec.norm), -s);
    const auto m = truncated_moment(ds, 4, phi, s);
    EXPECT_NEAR(m.raw, raw, 1e-13);
    EXPECT_NEAR(m.normalized, raw / std::log(1 / (s - 1)), 1e-13);
    EXPECT_THROW(ell(1.0), std::domain_error);
}

TEST(Empirical, SectorSetIdentities) {
    const auto ds = fixture();
    const double s = 1.01;
    const double full = sector_density(ds, 0.0, pi, 0.0, s);
    EXPECT_EQ(full, sector_density(ds, 1.0, 4.0, 0.0, s));
    // the open half-plane Re(a e^{-i phi}) > 0 is the sector phi +- pi/2
    for (double phi : {0.0, 0.7, 2.0, 4.5}) EXPECT_EQ(halfplane_density(ds, phi, 0.0, s), sector_density(ds, phi, pi / 2, 0.0, s));
    // |a| > q over the whole circle
    EXPECT_EQ(large_abs_density(ds, 1.0, s), sector_density(ds, 0.0, pi, 1.0 + 1e-9, s));
    // eight disjoint sectors of half-width pi/8 tile the circle
    double tiles = 0;
    for (int k = 0; k < 8; ++k) tiles += sector_density(ds, pi / 8 + k * pi / 4, pi / 8, 0.0, s);
    EXPECT_NEAR(tiles, full, 1e-14);
    // complement
    EXPECT_NEAR(sector_density(ds, 0.3, 1.0, 0.0, s) + sector_density(ds, 0.3 + pi, pi - 1.0, 0.0, s), full, 1e-14);
    EXPECT_THROW(sector_density(ds, 0.0, 0.0, 0.0, s), std::domain_error);
}

TEST(Empirical, ZeroHasNoArgument) {
    auto ds = make_dataset({{2, {0.0, 0.0}, std::nullopt}, {3, {1.0, 0.0}, std::nullopt}});
    EXPECT_EQ(sector_density(ds, 0.0, pi, 0.0, 1.1), std::pow(3.0, -1.1) / ell(1.1));
}

TEST(Empirical, RotationMovesArgmax) {
    const auto ds = fixture();
    const int grid = 64;
    const int base = argmax_center(ds, grid, pi / 5, 1.01);
    for (int m : {1, 5, 17, 40}) {
        const auto rot = rotate(ds, 2 * pi * m / grid);
        EXPECT_EQ(argmax_center(rot, grid, pi / 5, 1.01), (base + m) % grid) << m;
    }
}

TEST(Empirical, PairwiseSum) {
    std::vector<double> x(1000);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = 1.0 / static_cast<double>(i + 1);
    double naive = 0;
    for (double v : x) naive += v;
    EXPECT_NEAR(pairwise_sum(x), naive, 1e-12);
    EXPECT_EQ(pairwise_sum(x), pairwise_sum(x));
    EXPECT_EQ(pairwise_sum(std::vector<double>{}), 0.0);
}

TEST(Parsing, CsvBasics) {
    std::istringstream in("norm,re,im,mu\n# comment\n5,0.5,-0.25,\n2,1,0,3.14\n\n");
    const auto ds = parse_csv(in);
    ASSERT_EQ(ds.records.size(), 2u);
    EXPECT_EQ(ds.records[0].norm, 2);
    EXPECT_EQ(ds.records[0].mu, 3.14);
    EXPECT_EQ(ds.records[1].a, std::complex<double>(0.5, -0.25));
    EXPECT_FALSE(ds.records[1].mu.has_value());

    std::istringstream reordered("im,norm,re\n1,3,2\n");
    EXPECT_EQ(parse_csv(reordered).records[0].a, std::complex<double>(2, 1));

    std::istringstream empty("");
    EXPECT_TRUE(parse_csv(empty).records.empty());
}

TEST(Parsing, CsvErrorsCarryLine) {
    auto line_of = [](const std::string& text) -> std::size_t {
        std::istringstream in(text);
        try {
            parse_csv(in);
        } catch (const ParseError& e) {
            return e.line();
        }
        return 0;
    };
    EXPECT_EQ(line_of("norm,re,im\n2,1,0\n3,x,0\n"), 3u);
    EXPECT_EQ(line_of("norm,re\n2,1\n"), 1u);
    EXPECT_EQ(line_of("norm,re,im\n2,1\n"), 2u);
    EXPECT_EQ(line_of("norm,re,im\n\n1,1,0\n"), 3u);
    EXPECT_EQ(line_of("norm,re,im\n2.5,1,0\n"), 2u);
}

TEST(Parsing, RoundTrips) {
    const auto ds = synth_dataset(3, SynthModel::rays, 200, 4);
    const auto back = parse_json(to_json(ds).dump());
    ASSERT_EQ(back.records.size(), ds.records.size());
    for (std::size_t i = 0; i < ds.records.size(); ++i) {
        EXPECT_EQ(back.records[i].norm, ds.records[i].norm);
        EXPECT_EQ(back.records[i].a, ds.records[i].a);
        EXPECT_EQ(back.records[i].mu, ds.records[i].mu);
    }
    EXPECT_EQ(back.meta.char_order, 4);

    std::stringstream csv;
    write_csv(csv, ds);
    const auto back_csv = parse_csv(csv);
    for (std::size_t i = 0; i < ds.records.size(); ++i) EXPECT_EQ(back_csv.records[i].a, ds.records[i].a);
}

TEST(Parsing, JsonForms) {
    const auto a = parse_json(R"([{"norm": 3, "re": 1.5, "im": 0}])");
    EXPECT_EQ(a.records.size(), 1u);
    const auto b = parse_json(R"({"meta": {"label": "x", "r": 5, "excluded": "p=11"}, "records": []})");
    EXPECT_EQ(b.meta.char_order, 5);
    EXPECT_EQ(b.meta.excluded_note, "p=11");
    EXPECT_THROW(parse_json("[{\"norm\": 3}]"), ParseError);
    EXPECT_THROW(parse_json("{\n\"records\": [\n}"), ParseError);
    EXPECT_THROW(parse_json("{\"meta\": {}}"), ParseError);
}

TEST(Parsing, SanityWarnings) {
    const auto ds = make_dataset({{2, {3.0, 0.0}, std::nullopt}, {3, {1.0, 0.0}, std::nullopt}});
    EXPECT_EQ(ds.warnings.size(), 1u);
    EXPECT_THROW(make_dataset({{1, {0.0, 0.0}, std::nullopt}}), std::invalid_argument);
}

TEST(Compare, ReportShape) {
    const auto ds = synth_dataset(5, SynthModel::rays, 1000, 7);
    const auto rep = compare_report(ds, 7, default_s_values());
    EXPECT_EQ(rep.moments.size(), 12u);
    EXPECT_EQ(rep.densities.size(), 9u);
    for (const auto& m : rep.moments)
        if (m.kind == BoundKind::equality) {
            EXPECT_FALSE(m.flagged);
        }
    for (const auto& d : rep.densities)
        if (d.relation == "lower") {
            EXPECT_FALSE(d.flagged);
        }
    const auto empty = compare_report(make_dataset({}), 3, default_s_values());
    EXPECT_TRUE(empty.moments.empty());
    EXPECT_TRUE(empty.densities.empty());
}

TEST(Compare, FlagsLargeEighthMoment) {
    // every eigenvalue at the sanity bound makes the eighth moment huge
    std::vector<EigenvalueRecord> recs;
    for (auto p : first_primes(500)) recs.push_back({p, {1.9, 0.0}, std::nullopt});
    const auto rep = compare_report(make_dataset(recs), 7, {1.001});
    bool flagged8 = false;
    for (const auto& m : rep.moments)
        if (m.k == 8) flagged8 = m.flagged;
    EXPECT_TRUE(flagged8);
}
