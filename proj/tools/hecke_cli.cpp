// hecke: command-line front end for the moment/density toolkit.
//
// Exit codes: 0 ok, 2 usage or parse error, 3 solver infeasible.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hecke/hecke.hpp"

namespace {

using hecke::Rational;
using json = nlohmann::ordered_json;

enum class OutputFormat { table, csv, json };

struct GlobalConfig {
    double cap = 1.0 / 234.0;
    double tol = 1e-9;
    int grid = 10000;
    OutputFormat format = OutputFormat::table;
};

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fmt(const char* spec, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, x);
    return buf;
}

std::string real(double x) { return fmt("%.12g", x); }
std::string rad(double x) { return fmt("%.5f", x); }
std::string deg(double x) { return fmt("%.3f", x); }
std::string rational(const Rational& q) { return q.get_str() + " (" + real(q.get_d()) + ")"; }

// One output cell: display text for table/csv, typed value for json.
struct Field {
    std::string name;
    std::string text;
    json value;
};

using Row = std::vector<Field>;

Field f_str(std::string name, const std::string& v) { return {std::move(name), v, v}; }
Field f_int(std::string name, long v) { return {std::move(name), std::to_string(v), v}; }
Field f_bool(std::string name, bool v) { return {std::move(name), v ? "true" : "false", v}; }
Field f_real(std::string name, double v) { return {std::move(name), real(v), v}; }
Field f_rad(std::string name, double v) { return {std::move(name), rad(v), v}; }
Field f_deg(std::string name, double v) { return {std::move(name), deg(v), v}; }

struct Report {
    std::vector<Row> rows;
    // table mode only: printed before the rows (or instead of them when rows is empty)
    std::vector<std::string> lines;
    bool table_rows = true;
};

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

// display width in code points, good enough for the symbols we print
std::size_t width(const std::string& s) {
    std::size_t w = 0;
    for (unsigned char c : s)
        if ((c & 0xC0) != 0x80) ++w;
    return w;
}

void emit(const Report& rep, OutputFormat format) {
    switch (format) {
        case OutputFormat::json: {
            json arr = json::array();
            for (const auto& row : rep.rows) {
                json obj = json::object();
                for (const auto& f : row) obj[f.name] = f.value;
                arr.push_back(obj);
            }
            std::cout << arr.dump(2) << "\n";
            return;
        }
        case OutputFormat::csv: {
            if (rep.rows.empty()) return;
            const Row& head = rep.rows.front();
            for (std::size_t i = 0; i < head.size(); ++i) std::cout << (i ? "," : "") << csv_escape(head[i].name);
            std::cout << "\n";
            for (const auto& row : rep.rows) {
                for (std::size_t i = 0; i < row.size(); ++i) std::cout << (i ? "," : "") << csv_escape(row[i].text);
                std::cout << "\n";
            }
            return;
        }
        case OutputFormat::table: {
            for (const auto& l : rep.lines) std::cout << l << "\n";
            if (!rep.table_rows || rep.rows.empty()) return;
            const Row& head = rep.rows.front();
            std::vector<std::size_t> w(head.size());
            for (std::size_t i = 0; i < head.size(); ++i) w[i] = width(head[i].name);
            for (const auto& row : rep.rows)
                for (std::size_t i = 0; i < row.size() && i < w.size(); ++i) w[i] = std::max(w[i], width(row[i].text));
            auto line = [&](auto get) {
                std::string out;
                for (std::size_t i = 0; i < w.size(); ++i) {
                    const std::string cell = get(i);
                    out += cell;
                    if (i + 1 < w.size()) out += std::string(w[i] - width(cell) + 2, ' ');
                }
                std::cout << out << "\n";
            };
            line([&](std::size_t i) { return head[i].name; });
            for (const auto& row : rep.rows) line([&](std::size_t i) { return i < row.size() ? row[i].text : ""; });
            return;
        }
    }
}

void check_r(int r) {
    if (r < 2) throw UsageError("--r must be >= 2");
}

hecke::PipelineConfig pipeline_config(const GlobalConfig& g) {
    hecke::PipelineConfig cfg;
    cfg.cap = g.cap;
    cfg.tol = g.tol;
    return cfg;
}

// ---------------------------------------------------------------------------

Report cmd_decompose(int m, int n) {
    if (m < 0 || n < 0 || m + n < 1) throw UsageError("decompose: need M, N >= 0 and M + N >= 1");
    const auto mults = hecke::tensor_power(m, n);
    Report rep;
    rep.table_rows = false;
    rep.lines.push_back(hecke::to_string(mults));
    for (auto it = mults.rbegin(); it != mults.rend(); ++it) {
        rep.rows.push_back({f_str("class", hecke::to_string(it->first)), f_int("sym", it->first.a),
                            f_int("det", it->first.b), f_str("multiplicity", it->second.get_str())});
    }
    return rep;
}

std::string a_display(const hecke::PoleInterval& p) {
    if (p.is_certain()) return std::to_string(p.lo);
    if (p.lo == 0) return "≤" + std::to_string(p.hi);
    return hecke::to_string(p);
}

Report cmd_atable(int r) {
    check_r(r);
    Report rep;
    for (int n = 0; n <= 8; ++n) {
        const auto p = hecke::a_table(n, r);
        rep.rows.push_back({f_int("n", n), f_str("A", a_display(p)), f_int("lo", p.lo), f_int("hi", p.hi)});
    }
    return rep;
}

Report cmd_poles(int k, int n, int r, bool sym4_excluded) {
    check_r(r);
    if (k != 3 && k != 4 && k != 6 && k != 8) throw UsageError("poles: --k must be 3, 4, 6 or 8");
    if (n < 0 || n > k) throw UsageError("poles: need 0 <= n <= k");
    hecke::Hypotheses h = hecke::Hypotheses::with_order(r);
    if (sym4_excluded) h.sym4_self_twist = hecke::Sym4SelfTwist::excluded;

    const auto fs = hecke::shapes::for_moment(k, n);
    Report rep;
    for (const auto& f : fs) {
        const auto p = hecke::pole_order_product(f, h);
        rep.rows.push_back({f_str("source", f.label), f_str("product", hecke::to_string(f)), f_int("lo", p.lo),
                            f_int("hi", p.hi)});
    }
    const auto p = hecke::reconcile(fs, k - n, n, h);
    rep.rows.push_back({f_str("source", "reconciled"), f_str("product", ""), f_int("lo", p.lo), f_int("hi", p.hi)});
    return rep;
}

Report cmd_constants(int r, std::optional<double> phi) {
    check_r(r);
    const auto b = hecke::moment_bounds(r);
    Report rep;
    auto row = [&](const std::string& name, const std::string& text, const json& value, const char* kind) {
        rep.rows.push_back({f_str("quantity", name), Field{"value", text, value}, f_str("kind", kind)});
    };
    auto poly = [&](const std::string& name, const hecke::FourierCosPoly& p, hecke::BoundKind kind) {
        if (phi) {
            row(name + "(" + real(*phi) + ")", real(p(*phi)), p(*phi), hecke::to_string(kind));
            return;
        }
        json coeffs = json::object();
        for (const auto& [h, c] : p.coefficients()) coeffs["cos" + std::to_string(h)] = c.get_str();
        row(name, hecke::to_string(p), coeffs, hecke::to_string(kind));
    };
    auto rat = [&](const std::string& name, const Rational& q, const char* kind) {
        row(name, rational(q), json{{"exact", q.get_str()}, {"decimal", q.get_d()}}, kind);
    };
    rat("q3", b.q3, "equality");
    poly("q4", b.q4, b.q4_kind);
    poly("q6", b.q6, b.q6_kind);
    rat("q6 max", b.q6_upper, "upper");
    rat("q8", b.q8_upper, "upper");
    const Rational scaled = b.q8_upper * 256;
    rat("256 q8", scaled, "upper");
    rat("q8 pipeline", b.q8_pipeline, "upper");
    return rep;
}

Report cmd_sector(int r, const GlobalConfig& g) {
    check_r(r);
    const auto cfg = pipeline_config(g);
    const auto res = hecke::theorem_pipeline(r, cfg);
    Report rep;
    auto add = [&](Row row) { rep.rows.push_back(std::move(row)); };
    add({f_str("quantity", "threshold"), f_real("value", res.threshold)});
    add({f_str("quantity", "Q"), f_real("value", res.Q)});
    add({f_str("quantity", "half-angle rad"), f_rad("value", res.half_angle)});
    add({f_str("quantity", "half-angle deg"), f_deg("value", res.half_angle * 180.0 / std::numbers::pi)});
    add({f_str("quantity", "full sector rad"), f_rad("value", 2.0 * res.half_angle)});
    add({f_str("quantity", "cap"), f_real("value", res.cap)});
    add({f_str("quantity", "q8"), f_real("value", res.inputs.q8)});
    add({f_str("quantity", "d"), f_real("value", res.boundary.d)});
    add({f_str("quantity", "alpha"), f_real("value", res.boundary.alpha)});
    add({f_str("quantity", "beta"), f_real("value", res.boundary.beta)});
    for (const auto& br : res.branches) {
        add({f_str("quantity", br.label + " (" + br.condition + ") threshold"), f_real("value", br.threshold)});
        if (br.abs_bound) add({f_str("quantity", br.label + " |a| >"), f_real("value", *br.abs_bound)});
    }
    return rep;
}

Report cmd_boundary(double q4, double q6, double q8, bool scan, const GlobalConfig& g) {
    const hecke::MomentInputs q{q4, q6, q8};
    const auto s = hecke::solve_boundary(q, g.cap, g.tol);
    Report rep;
    auto add = [&](const char* name, double v) { rep.rows.push_back({f_str("quantity", name), f_real("value", v)}); };
    add("d", s.d);
    add("alpha", s.alpha);
    add("beta", s.beta);
    add("threshold", s.threshold);
    add("threshold (T form)", s.threshold_t_form);
    add("residual E1", s.residuals[0]);
    add("residual E2", s.residuals[1]);
    if (scan) {
        const auto sc = hecke::threshold_scan(q, g.cap, g.grid);
        add("scan argmin d", sc.argmin_d);
        add("scan min threshold", sc.min_threshold);
        add("scan grid step", sc.grid_step);
        rep.rows.push_back({f_str("quantity", "scan consistent"), f_bool("value", sc.consistent)});
    }
    return rep;
}

Report cmd_lemma(std::optional<double> Q, const GlobalConfig& g) {
    Report rep;
    if (Q) {
        rep.rows.push_back({f_str("quantity", "ks_bound(" + real(*Q) + ")"), f_real("value", hecke::ks_bound(*Q))});
    }
    const double q = hecke::min_Q_for_cap(g.cap);
    rep.rows.push_back({f_str("quantity", "min Q for cap " + real(g.cap)), f_real("value", q)});
    return rep;
}

Report cmd_lines(int r, const GlobalConfig& g) {
    check_r(r);
    const auto ra = hecke::argument_lines(r);
    Report rep;
    for (std::size_t i = 0; i < ra.rays.size(); ++i) {
        rep.rows.push_back({f_int("k", static_cast<long>(i)), f_rad("rad", ra.rays[i]),
                            f_deg("deg", ra.rays[i] * 180.0 / std::numbers::pi)});
    }
    const double sector = hecke::min_guaranteed_sector(r, pipeline_config(g));
    rep.lines.push_back("guaranteed sector: " + rad(sector) + " rad = " + deg(sector * 180.0 / std::numbers::pi) +
                        "°");
    return rep;
}

Report cmd_check_sector(int r, double center, double angle, const GlobalConfig& g) {
    if (r < 2 || r > 5) throw UsageError("check-sector: --r must be in 2..5");
    const auto c = hecke::low_order_sector_check(r, center, angle, pipeline_config(g));
    Report rep;
    Row row{f_bool("ok", c.ok)};
    if (c.ok) {
        row.push_back(f_rad("phi", c.phi_witness));
        row.push_back(f_real("threshold", c.threshold_used));
    }
    rep.rows.push_back(std::move(row));
    return rep;
}

Report cmd_verify(const std::string& path, std::optional<int> r_opt, const std::vector<double>& s_values, double phi,
                  const GlobalConfig& g) {
    hecke::EigenvalueDataset ds;
    try {
        ds = hecke::load_dataset(path);
    } catch (const hecke::ParseError& e) {
        throw UsageError(path + ": " + e.what());
    } catch (const std::exception& e) {
        throw UsageError(path + ": " + e.what());
    }
    for (const auto& w : ds.warnings) std::cerr << "warning: " << w << "\n";

    const std::optional<int> r = r_opt ? r_opt : ds.meta.char_order;
    if (!r) throw UsageError("verify: --r not given and the dataset carries no character order");
    check_r(*r);
    for (double s : s_values)
        if (!(s > 1.0)) throw UsageError("verify: every s must exceed 1");

    hecke::CompareOptions opt;
    opt.phi = phi;
    opt.pipeline = pipeline_config(g);
    const auto cr = hecke::compare_report(ds, *r, s_values, opt);

    Report rep;
    rep.lines.push_back("records: " + std::to_string(cr.records) + ", r = " + std::to_string(cr.r) +
                        ", phi = " + real(cr.phi));
    for (const auto& m : cr.moments) {
        rep.rows.push_back({f_real("s", m.s), f_str("quantity", "k=" + std::to_string(m.k)),
                            f_real("value", m.normalized), f_real("reference", m.target),
                            f_str("relation", hecke::to_string(m.kind)), f_real("slack", m.slack),
                            f_bool("flagged", m.flagged)});
    }
    for (const auto& d : cr.densities) {
        rep.rows.push_back({f_real("s", d.s), f_str("quantity", d.set), f_real("value", d.density),
                            f_real("reference", d.reference), f_str("relation", d.relation), f_real("slack", d.slack),
                            f_bool("flagged", d.flagged)});
    }
    return rep;
}

void cmd_synth(std::uint64_t seed, const std::string& model, std::size_t count, int r, const std::string& out,
               OutputFormat format) {
    hecke::SynthModel m;
    if (model == "rays")
        m = hecke::SynthModel::rays;
    else if (model == "symmetric")
        m = hecke::SynthModel::symmetric_rays;
    else if (model == "uniform")
        m = hecke::SynthModel::uniform_angle;
    else
        throw UsageError("synth: --model must be rays, symmetric or uniform");
    if (m != hecke::SynthModel::uniform_angle) check_r(r);
    const auto ds = hecke::synth_dataset(seed, m, count, r);

    const bool as_json = out.empty() ? format == OutputFormat::json : hecke::format_from_path(out) == hecke::DataFormat::json;
    std::ofstream file;
    if (!out.empty()) {
        file.open(out);
        if (!file) throw UsageError("synth: cannot write " + out);
    }
    std::ostream& os = out.empty() ? std::cout : file;
    if (as_json)
        os << hecke::to_json(ds).dump(2) << "\n";
    else
        hecke::write_csv(os, ds);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Moment, pole-order and density tools for GL(2) Hecke eigenvalues"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalConfig g;
    std::map<std::string, OutputFormat> formats{
        {"table", OutputFormat::table}, {"csv", OutputFormat::csv}, {"json", OutputFormat::json}};
    app.add_option("--format", g.format, "table, csv or json")->transform(CLI::CheckedTransformer(formats));
    app.add_option("--cap", g.cap, "density cap")->envname("HECKE_CAP");
    app.add_option("--tol", g.tol, "solver tolerance")->envname("HECKE_TOL");
    app.add_option("--grid", g.grid, "threshold scan grid size");

    int m = 0, n = 0, r = 0, k = 0;
    std::optional<int> r_opt;
    std::optional<double> phi_opt, Q_opt;
    double phi = 0.0, center = 0.0, angle = 0.0;
    double q4 = 0.75, q6 = 25.0 / 16.0, q8 = 519.0 / 128.0;
    bool scan = false, sym4_excluded = false;
    std::string data, out, model = "rays";
    std::vector<double> s_values = hecke::default_s_values();
    std::uint64_t seed = 1;
    std::size_t count = 1000;

    auto* decompose = app.add_subcommand("decompose", "Sym-det decomposition of std^M (x) dual^N");
    decompose->add_option("--m", m)->required();
    decompose->add_option("--n", n)->required();

    auto* atable = app.add_subcommand("atable", "pole orders A(n, r) of the eighth-moment series");
    atable->add_option("--r", r)->required();

    auto* poles = app.add_subcommand("poles", "pole-order intervals for one tensor power");
    poles->add_option("--k", k)->required();
    poles->add_option("--n", n)->required();
    poles->add_option("--r", r)->required();
    poles->add_flag("--sym4-excluded", sym4_excluded, "assume Sym^4 has no nontrivial self-twist");

    auto* constants = app.add_subcommand("constants", "leading moment constants q3, q4, q6, q8");
    constants->add_option("--r", r)->required();
    constants->add_option("--phi", phi_opt);

    auto* sector = app.add_subcommand("sector", "threshold and guaranteed sector");
    sector->add_option("--r", r)->required();

    auto* boundary = app.add_subcommand("boundary", "solve the boundary system");
    boundary->add_option("--q4", q4);
    boundary->add_option("--q6", q6);
    boundary->add_option("--q8", q8);
    boundary->add_flag("--scan", scan, "also run the grid scan");

    auto* lemma = app.add_subcommand("lemma", "large-|a| density bound");
    lemma->add_option("--Q", Q_opt);

    auto* lines = app.add_subcommand("lines", "argument rays for character order r");
    lines->add_option("--r", r)->required();

    auto* check = app.add_subcommand("check-sector", "is a sector forced to hold eigenvalues (r = 2..5)");
    check->add_option("--r", r)->required();
    check->add_option("--center", center)->required();
    check->add_option("--angle", angle)->required();

    auto* verify = app.add_subcommand("verify", "compare a dataset against the limiting constants");
    verify->add_option("--data", data)->required();
    verify->add_option("--r", r_opt);
    verify->add_option("--s", s_values)->delimiter(',');
    verify->add_option("--phi", phi);

    auto* synth = app.add_subcommand("synth", "write a synthetic dataset");
    synth->add_option("--seed", seed);
    synth->add_option("--model", model, "rays, symmetric or uniform");
    synth->add_option("--count", count);
    synth->add_option("--r", r);
    synth->add_option("--out", out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (!(g.cap > 0.0 && g.cap < 1.0)) throw UsageError("--cap must lie in (0, 1)");
        if (!(g.tol > 0.0)) throw UsageError("--tol must be positive");
        if (g.grid < 10) throw UsageError("--grid must be >= 10");

        Report rep;
        if (*decompose)
            rep = cmd_decompose(m, n);
        else if (*atable)
            rep = cmd_atable(r);
        else if (*poles)
            rep = cmd_poles(k, n, r, sym4_excluded);
        else if (*constants)
            rep = cmd_constants(r, phi_opt);
        else if (*sector)
            rep = cmd_sector(r, g);
        else if (*boundary)
            rep = cmd_boundary(q4, q6, q8, scan, g);
        else if (*lemma)
            rep = cmd_lemma(Q_opt, g);
        else if (*lines)
            rep = cmd_lines(r, g);
        else if (*check)
            rep = cmd_check_sector(r, center, angle, g);
        else if (*verify)
            rep = cmd_verify(data, r_opt, s_values, phi, g);
        else if (*synth) {
            cmd_synth(seed, model, count, r, out, g.format);
            return 0;
        }
        emit(rep, g.format);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const hecke::InfeasibleError& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
