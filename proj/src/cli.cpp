#include "hyperlab/cli.hpp"

#include "hyperlab/criteria.hpp"
#include "hyperlab/eigenfield.hpp"
#include "hyperlab/errors.hpp"
#include "hyperlab/families.hpp"
#include "hyperlab/measure.hpp"
#include "hyperlab/translation.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#ifndef HYPERLAB_VERSION
#define HYPERLAB_VERSION "0.0.0"
#endif

namespace hyperlab::cli {

using report::Json;

std::string version() { return HYPERLAB_VERSION; }

namespace {

// ------------------------------------------------------------ param tables

const std::map<std::string, std::vector<std::string>>& key_table() {
    static const std::map<std::string, std::vector<std::string>> t = {
        {"criterion", {"rule", "K", "N", "tau", "invertible"}},
        {"mscan", {"rule", "a_grid", "N", "tau", "analytic_k_max", "expect"}},
        {"family-a", {"n_values", "gap_k_max", "check_limit"}},
        {"family-b", {"n_values", "ms_k_max", "lambda_b", "check_limit"}},
        {"admissible-c", {"c_min", "c_max", "c_points", "b_resolution", "slack"}},
        {"lattice", {"delta", "c", "n"}},
        {"runge", {"centers", "radius", "targets", "eps", "degree_cap", "degree_step"}},
        {"common-vector",
         {"u", "x", "phase_count", "phase_offset", "b_values", "p_radius", "p_samples", "fit_radius", "points",
          "degree_cap", "degree_step"}},
        {"sm2", {"alpha", "phase", "dim", "k", "delta", "p", "ball_radius", "grid_points"}},
        {"kitai", {"rule", "x", "w", "N"}},
        {"hardy", {"phi", "z", "dim"}},
        {"pn-checks", {"T", "x", "f", "N", "b_samples", "inclusion_n", "inclusion_samples"}},
        {"cn-volume", {"T", "x", "f", "n_values", "samples", "box", "partitions", "threads", "trace_limit"}},
        {"mf-area", {"roots", "d", "samples", "partitions", "threads", "trace_limit"}},
        {"threshold", {"n_max"}},
    };
    return t;
}

// --------------------------------------------------------------- parsing

[[noreturn]] void bad(const std::string& what) { throw ConfigError(what); }

Complex parse_complex(const Json& j, const std::string& key) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return {j[0].get<double>(), j[1].get<double>()};
    bad(key + ": expected a number or [re, im]");
}

std::vector<Complex> parse_complex_list(const Json& j, const std::string& key) {
    if (!j.is_array()) bad(key + ": expected an array");
    std::vector<Complex> out;
    for (const auto& e : j) out.push_back(parse_complex(e, key));
    return out;
}

Eigen::MatrixXcd parse_matrix(const Json& j, const std::string& key) {
    if (!j.is_array() || j.empty()) bad(key + ": expected a non-empty array of rows");
    const auto n = static_cast<Eigen::Index>(j.size());
    Eigen::MatrixXcd m(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
        const auto row = parse_complex_list(j[static_cast<std::size_t>(r)], key);
        if (static_cast<Eigen::Index>(row.size()) != n) bad(key + ": matrix must be square");
        for (Eigen::Index c = 0; c < n; ++c) m(r, c) = row[static_cast<std::size_t>(c)];
    }
    return m;
}

Json matrix_json(const Eigen::MatrixXcd& m) {
    Json a = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(report::complex_json(m(r, c)));
        a.push_back(row);
    }
    return a;
}

// Reads params, records the resolved value of every key (defaults included)
// so the echoed block reruns the same computation.
class Params {
public:
    Params(const std::string& cmd, const Json& in, Json& out) : cmd_(cmd), in_(in), out_(out) {
        const auto& keys = param_keys(cmd);
        for (auto it = in.begin(); it != in.end(); ++it)
            if (std::find(keys.begin(), keys.end(), it.key()) == keys.end())
                bad(cmd + ": unknown parameter '" + it.key() + "'");
    }

    bool has(const std::string& key) const { return in_.contains(key); }

    const Json& raw(const std::string& key) const {
        if (!in_.contains(key)) bad(cmd_ + ": missing parameter '" + key + "'");
        return in_.at(key);
    }

    template <class T>
    T get(const std::string& key, const T& def) {
        T v = in_.contains(key) ? as<T>(key, in_.at(key)) : def;
        out_[key] = v;
        return v;
    }

    template <class T>
    T need(const std::string& key) {
        T v = as<T>(key, raw(key));
        out_[key] = v;
        return v;
    }

    void echo(const std::string& key, Json v) { out_[key] = std::move(v); }

private:
    template <class T>
    T as(const std::string& key, const Json& j) const {
        try {
            if constexpr (std::is_same_v<T, bool>) {
                if (!j.is_boolean()) bad(cmd_ + ": '" + key + "' must be a boolean");
            } else if constexpr (std::is_integral_v<T>) {
                if (!j.is_number_integer()) bad(cmd_ + ": '" + key + "' must be an integer");
            } else if constexpr (std::is_floating_point_v<T>) {
                if (!j.is_number()) bad(cmd_ + ": '" + key + "' must be a number");
            }
            return j.get<T>();
        } catch (const nlohmann::json::exception& e) {
            bad(cmd_ + ": bad value for '" + key + "': " + e.what());
        }
    }

    std::string cmd_;
    const Json& in_;
    Json& out_;
};

WeightRule parse_rule(const Json& j, Json& echo) {
    if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
        bad("rule: expected an object with a string 'kind'");
    static const std::set<std::string> allowed = {"kind", "value", "scale", "first_index", "values", "below", "above"};
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key())) bad("rule: unknown key '" + it.key() + "'");
    const std::string kind = j["kind"];
    echo = Json::object();
    echo["kind"] = kind;
    auto num = [&](const Json& o, const char* k, double def) {
        if (!o.contains(k)) return def;
        if (!o[k].is_number()) bad(std::string("rule: '") + k + "' must be a number");
        return o[k].get<double>();
    };
    auto tail = [&](const char* k) {
        TableTail t;
        if (!j.contains(k)) return t;
        const Json& o = j[k];
        if (!o.is_object()) bad(std::string("rule: '") + k + "' must be an object");
        for (auto it = o.begin(); it != o.end(); ++it)
            if (it.key() != "value" && it.key() != "ratio") bad("rule: unknown tail key '" + it.key() + "'");
        t.value = num(o, "value", 1.0);
        t.ratio = num(o, "ratio", 1.0);
        return t;
    };
    WeightRule rule = WeightRule::constant(1.0);
    try {
        if (kind == "constant") {
            rule = WeightRule::constant(num(j, "value", 1.0));
            echo["value"] = rule.constant_value();
        } else if (kind == "family_a") {
            rule = WeightRule::family_a();
        } else if (kind == "family_b") {
            rule = WeightRule::family_b();
        } else if (kind == "custom_table") {
            std::vector<double> values;
            if (j.contains("values")) {
                if (!j["values"].is_array()) bad("rule: 'values' must be an array");
                for (const auto& v : j["values"]) {
                    if (!v.is_number()) bad("rule: 'values' must hold numbers");
                    values.push_back(v.get<double>());
                }
            }
            if (j.contains("first_index") && !j["first_index"].is_number_integer())
                bad("rule: 'first_index' must be an integer");
            const std::int64_t first = j.value("first_index", std::int64_t{0});
            const TableTail below = tail("below"), above = tail("above");
            rule = WeightRule::custom_table(first, values, below, above);
            echo["first_index"] = first;
            echo["values"] = values;
            echo["below"] = {{"value", below.value}, {"ratio", below.ratio}};
            echo["above"] = {{"value", above.value}, {"ratio", above.ratio}};
        } else {
            bad("rule: unknown kind '" + kind + "'");
        }
        const double scale = num(j, "scale", 1.0);
        if (scale != 1.0) rule = rule.scaled(scale);
        echo["scale"] = scale;
    } catch (const std::invalid_argument& e) {
        bad(std::string("rule: ") + e.what());
    }
    return rule;
}

Json parse_rule_param(Params& P, const std::string& key, WeightRule& rule, const Json* def = nullptr) {
    Json echo;
    if (P.has(key))
        rule = parse_rule(P.raw(key), echo);
    else if (def)
        rule = parse_rule(*def, echo);
    else
        P.raw(key);  // throws
    P.echo(key, echo);
    return echo;
}

PolyC parse_poly(Params& P, const std::string& key, const PolyC* def = nullptr) {
    PolyC p;
    if (P.has(key))
        p = PolyC(parse_complex_list(P.raw(key), key));
    else if (def)
        p = *def;
    else
        P.raw(key);
    P.echo(key, report::poly_json(p));
    return p;
}

Complex parse_complex_param(Params& P, const std::string& key, std::optional<Complex> def = std::nullopt) {
    Complex z;
    if (P.has(key))
        z = parse_complex(P.raw(key), key);
    else if (def)
        z = *def;
    else
        P.raw(key);
    P.echo(key, report::complex_json(z));
    return z;
}

std::vector<Complex> parse_complex_list_param(Params& P, const std::string& key,
                                              std::optional<std::vector<Complex>> def = std::nullopt) {
    std::vector<Complex> v;
    if (P.has(key))
        v = parse_complex_list(P.raw(key), key);
    else if (def)
        v = *def;
    else
        P.raw(key);
    P.echo(key, report::complex_list(v));
    return v;
}

// ------------------------------------------------------------- reporting

struct Outcome {
    Json results = Json::object();
    bool bound_ok = true;
    std::vector<CsvFile> csv;
};

Json criterion_json(const criteria::CriterionReport& r) {
    Json j;
    j["rule"] = r.rule_id;
    j["path"] = r.path;
    j["invertible_mode"] = r.invertible_mode;
    j["horizon"] = r.horizon;
    j["tolerance"] = r.tolerance;
    j["verdict"] = criteria::to_string(r.verdict);
    Json traces = Json::array();
    for (const auto& t : r.traces) {
        Json w = Json::array();
        for (const auto& m : t.new_minima) w.push_back({{"n", m.n}, {"score", m.score}, {"log_score", m.log_score}});
        traces.push_back({{"k", t.k},
                          {"min_score", t.min_score},
                          {"log_min_score", t.log_min_score},
                          {"stalled", t.stalled},
                          {"new_minima", w}});
    }
    j["traces"] = traces;
    return j;
}

Json witness_json(const EigenWitness& w) {
    return {{"dim", w.dim},
            {"lambda", report::complex_json(w.lambda)},
            {"residual", w.residual},
            {"working_residual", w.working_residual},
            {"tail_bound", w.tail_bound},
            {"within_budget", w.within_budget()}};
}

Json estimate_json(const McEstimate& e) {
    return {{"mean", e.mean},
            {"std_error", e.std_error},
            {"half_width", e.half_width},
            {"samples", e.samples},
            {"hits", e.hits},
            {"rejected", e.rejected},
            {"seed", e.seed},
            {"partitions", e.partitions},
            {"box", {e.box.re_min, e.box.re_max, e.box.im_min, e.box.im_max}}};
}

std::string trace_csv(const std::vector<std::pair<Complex, bool>>& trace, const std::string& tag_name = "",
                      long long tag = 0) {
    std::ostringstream os;
    std::vector<std::string> header{"b_re", "b_im", "member"};
    if (!tag_name.empty()) header.insert(header.begin(), tag_name);
    report::Csv csv(os, header);
    for (const auto& [b, m] : trace) {
        if (!tag_name.empty()) csv.cell(tag);
        csv.cell(b.real()).cell(b.imag()).cell(static_cast<long long>(m));
        csv.end_row();
    }
    return os.str();
}

McOptions mc_options(Params& P, std::uint64_t seed) {
    McOptions o;
    o.seed = seed;
    o.samples = P.get<std::int64_t>("samples", 100000);
    o.partitions = P.get<int>("partitions", 8);
    o.threads = P.get<int>("threads", 0);
    o.trace_limit = P.get<std::size_t>("trace_limit", 0);
    if (o.samples < 1 || o.partitions < 1 || o.threads < 0) bad("samples and partitions must be positive");
    return o;
}

PnFamily parse_family(Params& P, int N) {
    const Eigen::MatrixXcd T = parse_matrix(P.raw("T"), "T");
    P.echo("T", matrix_json(T));
    const auto xs = parse_complex_list_param(P, "x");
    const auto fs = parse_complex_list_param(P, "f");
    if (static_cast<Eigen::Index>(xs.size()) != T.rows() || static_cast<Eigen::Index>(fs.size()) != T.rows())
        bad("x and f must match the dimension of T");
    Eigen::VectorXcd x = Eigen::Map<const Eigen::VectorXcd>(xs.data(), T.rows());
    Eigen::RowVectorXcd f = Eigen::Map<const Eigen::RowVectorXcd>(fs.data(), T.rows());
    return pn_family(MatrixOp(T), x, f, N);
}

// -------------------------------------------------------------- commands

using Handler = std::function<Outcome(Params&, std::optional<std::uint64_t>)>;

Outcome cmd_criterion(Params& P, std::optional<std::uint64_t>) {
    WeightRule rule = WeightRule::constant(1.0);
    parse_rule_param(P, "rule", rule);
    const int K = P.get<int>("K", 4);
    const auto N = P.get<std::int64_t>("N", 2000);
    const double tau = P.get<double>("tau", 1e-6);
    const bool inv = P.get<bool>("invertible", false);
    Outcome o;
    o.results = criterion_json(criteria::salas_verdict(rule, K, N, tau, inv));
    return o;
}

Outcome cmd_mscan(Params& P, std::optional<std::uint64_t>) {
    WeightRule rule = WeightRule::constant(1.0);
    const Json def = {{"kind", "family_a"}};
    parse_rule_param(P, "rule", rule, &def);
    const auto grid = P.get<std::vector<double>>("a_grid", {0.4, 0.6, 1.0, 1.9, 2.5});
    const auto N = P.get<std::int64_t>("N", 2000);
    const double tau = P.get<double>("tau", 1e-6);
    const int kmax = P.get<int>("analytic_k_max", 6);
    const auto expect = P.get<std::vector<std::string>>("expect", {});
    if (!expect.empty() && expect.size() != grid.size()) bad("mscan: 'expect' must match 'a_grid' in length");
    Outcome o;
    Json entries = Json::array();
    std::vector<std::string> verdicts;
    for (const auto& e : criteria::multiples_scan(rule, grid, N, tau, kmax)) {
        Json j;
        j["a"] = e.a;
        j["verdict"] = criteria::to_string(e.verdict);
        j["direct"] = criterion_json(e.direct);
        if (e.analytic) j["analytic"] = criterion_json(*e.analytic);
        entries.push_back(j);
        verdicts.push_back(criteria::to_string(e.verdict));
    }
    o.results["verdicts"] = verdicts;
    o.results["entries"] = entries;
    if (!expect.empty()) {
        o.results["matches_expected"] = verdicts == expect;
        o.bound_ok = verdicts == expect;
    }
    return o;
}

Outcome cmd_family_a(Params& P, std::optional<std::uint64_t>) {
    std::vector<std::string> ns;
    if (P.has("n_values")) {
        const Json& j = P.raw("n_values");
        if (!j.is_array()) bad("family-a: 'n_values' must be an array");
        for (const auto& v : j) {
            if (v.is_number_integer())
                ns.push_back(std::to_string(v.get<std::int64_t>()));
            else if (v.is_string())
                ns.push_back(v.get<std::string>());
            else
                bad("family-a: n values must be integers or decimal strings");
        }
    } else {
        ns = {"0", "7", "8", "9", "56", "64", "72"};
    }
    P.echo("n_values", ns);
    const int gk = P.get<int>("gap_k_max", 4);
    const auto limit = P.get<std::int64_t>("check_limit", 10000);

    Outcome o;
    Json vals = Json::array();
    for (const auto& s : ns) {
        BigInt n;
        try {
            n = BigInt(s);
        } catch (const std::exception&) {
            bad("family-a: bad integer '" + s + "'");
        }
        const auto v = families::family_a_eval(n);
        Json j;
        j["n"] = s;
        j["weight"] = v.weight.str();
        if (v.beta) {
            j["beta"] = v.beta->str();
            j["log2_beta"] = static_cast<double>(v.beta->log2());
        }
        const auto level = families::family_a_level(n);
        j["level"] = level ? Json(*level) : Json(nullptr);
        vals.push_back(j);
    }
    o.results["values"] = vals;

    const auto gaps = families::family_a_gap_checks(gk);
    Json gl = Json::array();
    for (const auto& g : gaps.levels)
        gl.push_back({{"k", g.k},
                      {"m", g.m.str()},
                      {"max_gap", g.max_gap.str()},
                      {"gap_bound", g.gap_bound.str()},
                      {"density", g.density.str()},
                      {"density_bound", g.density_bound.str()},
                      {"ok", g.ok}});
    o.results["gap_levels"] = gl;
    o.results["gaps_ok"] = gaps.ok;

    const auto cf = families::family_a_closed_form_check(limit);
    o.results["closed_form"] = {{"limit", cf.limit}, {"compared", cf.compared}, {"mismatches", cf.mismatches}};
    o.bound_ok = gaps.ok && cf.ok();
    return o;
}

Outcome cmd_family_b(Params& P, std::optional<std::uint64_t>) {
    const auto ns = P.get<std::vector<std::int64_t>>("n_values", {1, 5, 15, 25, 75, 125});
    const int mk = P.get<int>("ms_k_max", 4);
    const auto bs = P.get<std::vector<double>>("lambda_b", {1.0, 2.0, 3.0, 4.0, 5.0});
    const auto limit = P.get<std::int64_t>("check_limit", 10000);
    Outcome o;
    Json vals = Json::array();
    for (auto n : ns) {
        const auto v = families::family_b_eval(n);
        Json j;
        j["n"] = n;
        j["a"] = v.a.str();
        j["weight"] = v.weight.str();
        if (v.gamma_plus) j["gamma_plus"] = v.gamma_plus->str();
        if (v.gamma_minus) j["gamma_minus"] = v.gamma_minus->str();
        vals.push_back(j);
    }
    o.results["values"] = vals;
    const auto ms = families::reproduce_ms_identities(mk);
    Json lv = Json::array();
    for (const auto& l : ms.levels)
        lv.push_back({{"k", l.k},
                      {"n", l.n},
                      {"beta_plus_inv", l.beta_plus_inv.str()},
                      {"beta_minus", l.beta_minus.str()},
                      {"target", l.target.str()},
                      {"scaled_minus", l.scaled_minus.str()},
                      {"scaled_plus_inv", l.scaled_plus_inv.str()},
                      {"target3", l.target3.str()},
                      {"direct_agrees", l.direct_agrees},
                      {"ok", l.ok}});
    o.results["ms_identities"] = lv;
    o.results["ms_ok"] = ms.ok;
    Json lam = Json::array();
    for (double b : bs) {
        if (!(b >= 1.0 && b <= 5.0)) bad("family-b: lambda_b values must lie in [1, 5]");
        const auto l = families::lambda_pm(b);
        lam.push_back({{"b", b}, {"plus", l.plus}, {"minus", l.minus}});
    }
    o.results["lambda"] = lam;
    const auto cf = families::family_b_closed_form_check(limit);
    o.results["closed_form"] = {{"limit", cf.limit}, {"compared", cf.compared}, {"mismatches", cf.mismatches}};
    o.bound_ok = ms.ok && cf.ok();
    return o;
}

Outcome cmd_admissible_c(Params& P, std::optional<std::uint64_t>) {
    const double lo = P.get<double>("c_min", 0.5);
    const double hi = P.get<double>("c_max", 3.0);
    const int pts = P.get<int>("c_points", 500);
    const int res = P.get<int>("b_resolution", 401);
    const double slack = P.get<double>("slack", 1e-3);
    if (pts < 1 || !(hi > lo)) bad("admissible-c: need c_points >= 1 and c_max > c_min");
    std::vector<double> grid;
    // Half-open grid [c_min, c_max) with step (c_max - c_min) / c_points.
    for (int i = 0; i < pts; ++i) grid.push_back(lo + (hi - lo) * i / pts);
    const auto r = families::admissible_c_set(grid, res, slack);
    Outcome o;
    Json adm = Json::array();
    std::vector<double> cs;
    for (const auto& a : r.admissible) {
        adm.push_back({{"c", a.c}, {"witness_b", a.witness_b}});
        cs.push_back(a.c);
    }
    // Clusters: maximal runs of consecutive admissible grid points.
    Json clusters = Json::array();
    const double step = (hi - lo) / pts;
    for (std::size_t i = 0; i < cs.size();) {
        std::size_t j = i;
        while (j + 1 < cs.size() && cs[j + 1] - cs[j] < 1.5 * step) ++j;
        clusters.push_back({cs[i], cs[j]});
        i = j + 1;
    }
    o.results["admissible"] = adm;
    o.results["clusters"] = clusters;
    o.results["count"] = cs.size();
    return o;
}

Outcome cmd_lattice(Params& P, std::optional<std::uint64_t>) {
    const double delta = P.need<double>("delta");
    const double c = P.need<double>("c");
    const auto n = P.need<std::int64_t>("n");
    const auto s = lattice_construct(delta, c, n);
    Outcome o;
    o.results["delta_used"] = s.delta;
    o.results["m"] = s.m;
    o.results["h"] = s.h;
    o.results["R"] = s.R;
    o.results["k"] = s.k;
    o.results["radii"] = s.radii;
    o.results["count"] = s.points.size();
    o.results["expected_count"] = s.expected_count();
    o.results["warnings"] = s.warnings;
    o.results["checks"] = {{"integer_moduli", s.checks.integer_moduli},
                           {"modulus_window", s.checks.modulus_window},
                           {"separation", s.checks.separation},
                           {"angular_density", s.checks.angular_density},
                           {"min_distance", s.checks.min_distance},
                           {"separation_lower_bound", s.checks.separation_lower_bound},
                           {"max_angular_gap", s.checks.max_angular_gap},
                           {"density_bound", s.checks.density_bound}};
    std::ostringstream csv;
    write_lattice_csv(s, csv);
    o.csv.push_back({"lattice.csv", csv.str()});
    o.bound_ok = s.checks.ok() && static_cast<std::int64_t>(s.points.size()) == s.expected_count();
    return o;
}

Outcome cmd_runge(Params& P, std::optional<std::uint64_t>) {
    const auto centers = parse_complex_list_param(P, "centers");
    const double a = P.need<double>("radius");
    const Json& tj = P.raw("targets");
    if (!tj.is_array()) bad("runge: 'targets' must be an array of coefficient lists");
    std::vector<PolyC> targets;
    Json techo = Json::array();
    for (const auto& t : tj) {
        targets.emplace_back(parse_complex_list(t, "targets"));
        techo.push_back(report::poly_json(targets.back()));
    }
    P.echo("targets", techo);
    const double eps = P.need<double>("eps");
    const int cap = P.get<int>("degree_cap", 80);
    const int step = P.get<int>("degree_step", 4);
    const auto r = runge_simultaneous(centers, a, targets, eps, cap, step);
    Outcome o;
    o.results["success"] = r.success;
    o.results["degree"] = r.degree;
    o.results["errors"] = r.errors;
    o.results["max_error"] = r.errors.empty() ? 0.0 : *std::max_element(r.errors.begin(), r.errors.end());
    o.results["fit_samples_per_disk"] = r.fit_samples;
    o.results["cert_samples_per_disk"] = r.cert_samples;
    o.results["degree_trace"] = r.degree_trace;
    o.results["error_trace"] = r.error_trace;
    o.results["coefficients"] = report::poly_json(r.f);
    o.bound_ok = r.success;
    return o;
}

Outcome cmd_common_vector(Params& P, std::optional<std::uint64_t>) {
    CommonVectorConfig cfg;
    const PolyC zero;
    cfg.u = parse_poly(P, "u", &zero);
    cfg.x = parse_poly(P, "x");
    cfg.phase_count = P.get<int>("phase_count", 8);
    cfg.phase_offset = P.get<double>("phase_offset", 0.0);
    cfg.b_values = P.need<std::vector<double>>("b_values");
    cfg.p.radius = P.get<double>("p_radius", 0.5);
    cfg.p.samples = P.get<int>("p_samples", 256);
    cfg.fit_radius = P.get<double>("fit_radius", 0.75);
    cfg.degree_cap = P.get<int>("degree_cap", 120);
    cfg.degree_step = P.get<int>("degree_step", 8);
    const Json& pj = P.raw("points");
    if (!pj.is_array()) bad("common-vector: 'points' must be an array");
    Json pecho = Json::array();
    for (const auto& e : pj) {
        if (!e.is_object() || !e.contains("z") || !e.contains("b") || e.size() != 2 || !e["b"].is_number())
            bad("common-vector: each point is {\"z\": [re, im], \"b\": number}");
        ToyPoint t{parse_complex(e["z"], "points.z"), e["b"].get<double>()};
        cfg.points.push_back(t);
        pecho.push_back({{"z", report::complex_json(t.z)}, {"b", t.b}});
    }
    P.echo("points", pecho);
    const auto r = common_vector_stage(cfg);
    Outcome o;
    o.results["fit_success"] = r.fit.success;
    o.results["fit_degree"] = r.fit.degree;
    o.results["fit_eps"] = r.fit_eps;
    o.results["fit_errors"] = r.fit.errors;
    o.results["u_distance"] = r.u_distance;
    Json cells = Json::array();
    for (const auto& c : r.cells)
        cells.push_back({{"phase", c.phase},
                         {"b", c.b},
                         {"best_point", c.best_point},
                         {"distance", c.distance},
                         {"hit", c.hit}});
    o.results["cells"] = cells;
    o.results["all_hit"] = r.all_hit;
    o.results["stability_radius"] = r.stability_radius;
    o.results["ok"] = r.ok();
    o.bound_ok = r.ok();
    return o;
}

Outcome cmd_sm2(Params& P, std::optional<std::uint64_t>) {
    const double alpha = P.get<double>("alpha", 0.3);
    const double phase = P.get<double>("phase", 0.0);
    const int dim = P.get<int>("dim", 200);
    const int k = P.get<int>("k", 1);
    const double delta = P.get<double>("delta", 0.05);
    const int p = P.get<int>("p", 40);
    const double radius = P.get<double>("ball_radius", 1.0);
    const int grid = P.get<int>("grid_points", 101);
    const auto x = shift_eigenvector(std::polar(std::exp(-alpha), phase), dim);
    const auto r = sm2_construct_and_verify(x, k, alpha, delta, p, radius, grid);
    Outcome o;
    o.results["witness"] = witness_json(x);
    o.results["c"] = r.c;
    o.results["u_norm"] = r.u_norm;
    o.results["exponents"] = r.exponents;
    Json g = Json::array();
    for (const auto& h : r.grid.points)
        g.push_back({{"theta", h.t}, {"distance", h.distance}, {"best_n", h.best_n}, {"hit", h.hit}});
    o.results["grid"] = g;
    Json ex = Json::array();
    for (const auto& e : r.exact)
        ex.push_back({{"j", e.j}, {"n", e.n}, {"theta", e.theta}, {"distance", e.distance}, {"budget", e.budget},
                      {"ok", e.ok}});
    o.results["exact_hits"] = ex;
    o.results["all_hit"] = r.all_hit;
    o.results["exact_ok"] = r.exact_ok;
    o.bound_ok = r.ok() && x.within_budget();
    return o;
}

Outcome cmd_kitai(Params& P, std::optional<std::uint64_t>) {
    WeightRule rule = WeightRule::constant(1.0);
    const Json def = {{"kind", "custom_table"},
                      {"first_index", 1},
                      {"values", Json::array()},
                      {"below", {{"value", 0.5}, {"ratio", 1.0}}},
                      {"above", {{"value", 2.0}, {"ratio", 1.0}}}};
    parse_rule_param(P, "rule", rule, &def);
    LatticeVector x;
    Json xecho = Json::array();
    if (P.has("x")) {
        const Json& xj = P.raw("x");
        if (!xj.is_array()) bad("kitai: 'x' must be an array of {\"index\", \"value\"}");
        for (const auto& e : xj) {
            if (!e.is_object() || !e.contains("index") || !e["index"].is_number_integer() || !e.contains("value") ||
                e.size() != 2)
                bad("kitai: each entry of 'x' is {\"index\": integer, \"value\": [re, im]}");
            const auto i = e["index"].get<std::int64_t>();
            const Complex v = parse_complex(e["value"], "x.value");
            x.set(i, v);
            xecho.push_back({{"index", i}, {"value", report::complex_json(v)}});
        }
    } else {
        x = LatticeVector::basis(0);
        xecho.push_back({{"index", 0}, {"value", report::complex_json(1.0)}});
    }
    P.echo("x", xecho);
    const Complex w = parse_complex_param(P, "w", Complex(1.0));
    const int N = P.get<int>("N", 40);
    const auto s = kitai_series(rule, x, w, N);
    Outcome o;
    o.results["witness"] = witness_json(s.witness);
    o.results["t_ratio"] = s.t_ratio;
    o.results["s_ratio"] = s.s_ratio;
    o.results["first_index"] = s.first_index;
    o.results["u_norm"] = s.u.norm();
    o.bound_ok = s.witness.within_budget();
    return o;
}

Outcome cmd_hardy(Params& P, std::optional<std::uint64_t>) {
    const auto phi = parse_complex_list_param(P, "phi");
    const Complex z = parse_complex_param(P, "z");
    const int dim = P.get<int>("dim", 60);
    const auto w = hardy_adjoint_check(phi, z, dim);
    Outcome o;
    o.results["witness"] = witness_json(w);
    o.bound_ok = w.within_budget();
    return o;
}

Outcome cmd_pn_checks(Params& P, std::optional<std::uint64_t> seed) {
    const int N = P.get<int>("N", 20);
    const auto fam = parse_family(P, N);
    const auto bs = parse_complex_list_param(P, "b_samples", std::vector<Complex>{{0.3, 0.7}, {-1.2, 0.4}, {2.5, -1.1}});
    const auto inc_n = P.get<std::vector<int>>("inclusion_n", {});
    const auto inc_samples = P.get<std::int64_t>("inclusion_samples", 20000);
    if (!inc_n.empty() && !seed) bad("pn-checks: inclusion checks are Monte Carlo and need a seed");
    const auto r = pn_identity_checks(fam, bs);
    Outcome o;
    o.results["normalized"] = fam.normalized;
    Json polys = Json::array();
    for (const auto& p : fam.p) polys.push_back(report::poly_json(p));
    o.results["polynomials"] = polys;
    o.results["derivative_rel_error"] = r.derivative_rel_error;
    o.results["derivative_ok"] = r.derivative_ok;
    o.results["monic_ok"] = r.monic_ok;
    o.results["log_derivative_residual"] = r.log_derivative_residual;
    o.results["evaluated"] = r.evaluated;
    o.results["skipped"] = r.skipped;
    o.results["lower_bound_violations"] = r.lower_bound_violations;
    o.results["notes"] = r.notes;
    bool ok = r.derivative_ok && r.monic_ok && r.log_derivative_residual < 1e-9;
    Json inc = Json::array();
    for (int n : inc_n) {
        McOptions mo;
        mo.seed = *seed;
        mo.samples = inc_samples;
        const auto ir = bn_inclusion_check(fam, n, mo);
        inc.push_back({{"n", n},
                       {"sampled", ir.sampled},
                       {"in_set", ir.in_set},
                       {"violations", ir.violations},
                       {"min_ratio", ir.min_ratio}});
        ok = ok && ir.ok();
    }
    o.results["inclusion"] = inc;
    o.bound_ok = ok;
    return o;
}

Outcome cmd_cn_volume(Params& P, std::optional<std::uint64_t> seed) {
    const auto ns = P.get<std::vector<int>>("n_values", {6, 12});
    if (ns.empty()) bad("cn-volume: 'n_values' must not be empty");
    const auto fam = parse_family(P, *std::max_element(ns.begin(), ns.end()));
    std::optional<Box> box;
    if (P.has("box")) {
        const auto b = P.get<std::vector<double>>("box", {});
        if (b.size() != 4 || !(b[1] > b[0]) || !(b[3] > b[2])) bad("cn-volume: 'box' is [re_min, re_max, im_min, im_max]");
        box = Box{b[0], b[1], b[2], b[3]};
    }
    const McOptions mo = mc_options(P, *seed);
    Outcome o;
    Json vols = Json::array();
    std::vector<std::pair<Complex, bool>> trace;
    std::ostringstream csv;
    report::Csv c(csv, {"n", "b_re", "b_im", "member"});
    for (int n : ns) {
        const auto r = cn_volume(fam, n, box, mo);
        vols.push_back({{"n", n}, {"estimate", estimate_json(r.estimate)}, {"bound", r.bound},
                        {"within_bound", r.within_bound}});
        o.bound_ok = o.bound_ok && r.within_bound;
        for (const auto& [b, m] : r.trace) {
            c.cell(static_cast<long long>(n)).cell(b.real()).cell(b.imag()).cell(static_cast<long long>(m));
            c.end_row();
        }
    }
    o.results["volumes"] = vols;
    if (mo.trace_limit > 0) o.csv.push_back({"cn-volume.csv", csv.str()});
    return o;
}

Outcome cmd_mf_area(Params& P, std::optional<std::uint64_t> seed) {
    const auto roots = parse_complex_list_param(P, "roots");
    const double d = P.need<double>("d");
    const McOptions mo = mc_options(P, *seed);
    const auto r = mf_badset_area(roots, d, mo);
    Outcome o;
    const double n = static_cast<double>(roots.size());
    o.results["threshold"] = n * (1.0 + std::log(n)) / (d * d);
    o.results["estimate"] = estimate_json(r.estimate);
    o.results["bound"] = r.bound;
    o.results["within_bound"] = r.within_bound;
    if (mo.trace_limit > 0) o.csv.push_back({"mf-area.csv", trace_csv(r.trace)});
    o.bound_ok = r.within_bound;
    return o;
}

Outcome cmd_threshold(Params& P, std::optional<std::uint64_t>) {
    const auto n_max = P.get<std::int64_t>("n_max", 1000000);
    const auto r = threshold_check(n_max);
    Outcome o;
    o.results["all_ok"] = r.all_ok;
    o.results["max_ratio"] = r.max_ratio;
    o.results["argmax"] = r.argmax;
    o.results["analytic_max"] = r.analytic_max;
    o.results["analytic_ok"] = r.analytic_ok;
    o.bound_ok = r.all_ok && r.analytic_ok;
    return o;
}

const std::map<std::string, Handler>& handlers() {
    static const std::map<std::string, Handler> h = {
        {"criterion", cmd_criterion}, {"mscan", cmd_mscan},         {"family-a", cmd_family_a},
        {"family-b", cmd_family_b},   {"admissible-c", cmd_admissible_c}, {"lattice", cmd_lattice},
        {"runge", cmd_runge},         {"common-vector", cmd_common_vector}, {"sm2", cmd_sm2},
        {"kitai", cmd_kitai},         {"hardy", cmd_hardy},         {"pn-checks", cmd_pn_checks},
        {"cn-volume", cmd_cn_volume}, {"mf-area", cmd_mf_area},     {"threshold", cmd_threshold},
    };
    return h;
}

}  // namespace

const std::vector<std::string>& commands() {
    static const std::vector<std::string> c = {"criterion", "mscan",     "family-a",  "family-b", "admissible-c",
                                               "lattice",   "runge",     "common-vector", "sm2",  "kitai",
                                               "hardy",     "pn-checks", "cn-volume", "mf-area", "threshold"};
    return c;
}

const std::vector<std::string>& param_keys(const std::string& command) {
    const auto it = key_table().find(command);
    if (it == key_table().end()) throw ConfigError("unknown command '" + command + "'");
    return it->second;
}

bool needs_seed(const std::string& command) { return command == "cn-volume" || command == "mf-area"; }

RunConfig parse_config(const Json& j) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (it.key() != "command" && it.key() != "seed" && it.key() != "params")
            throw ConfigError("unknown top-level key '" + it.key() + "'");
    if (!j.contains("command") || !j["command"].is_string()) throw ConfigError("missing string 'command'");
    RunConfig cfg;
    cfg.command = j["command"].get<std::string>();
    param_keys(cfg.command);  // validates the name
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned()) throw ConfigError("'seed' must be a non-negative integer");
        cfg.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("params")) {
        if (!j["params"].is_object()) throw ConfigError("'params' must be an object");
        cfg.params = j["params"];
    }
    return cfg;
}

RunResult run(const RunConfig& cfg) {
    RunResult res;
    const auto t0 = std::chrono::steady_clock::now();
    Json resolved = Json::object();
    Outcome out;
    std::string status = "ok";
    try {
        param_keys(cfg.command);
        const auto& h = handlers().at(cfg.command);
        if (needs_seed(cfg.command) && !cfg.seed) throw ConfigError(cfg.command + ": a seed is required");
        Params P(cfg.command, cfg.params, resolved);
        out = h(P, cfg.seed);
        if (!out.bound_ok) {
            res.exit_code = exit_bound_violation;
            status = "bound_violation";
        }
    } catch (const ConfigError& e) {
        res.exit_code = exit_config_error;
        status = "config_error";
        res.message = e.what();
    } catch (const CoverageError& e) {
        res.exit_code = exit_config_error;
        status = "config_error";
        res.message = e.what();
    } catch (const std::invalid_argument& e) {
        // Precondition violations of the requested computation (includes
        // degenerate input).
        res.exit_code = exit_config_error;
        status = "config_error";
        res.message = e.what();
    } catch (const std::exception& e) {
        res.exit_code = exit_numerical_failure;
        status = "numerical_failure";
        res.message = e.what();
    }
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    Json config;
    config["command"] = cfg.command;
    if (cfg.seed) config["seed"] = *cfg.seed;
    config["params"] = resolved;
    res.report["command"] = cfg.command;
    res.report["version"] = version();
    res.report["config"] = config;
    res.report["status"] = status;
    res.report["exit_code"] = res.exit_code;
    if (!res.message.empty()) res.report["error"] = res.message;
    res.report["results"] = out.results;
    res.report["wall_time_s"] = wall;
    res.csv = std::move(out.csv);
    return res;
}

int run_file(const std::string& config_path, std::optional<std::uint64_t> seed_override, const std::string& out_dir,
             bool quiet, std::ostream& log) {
    RunConfig cfg;
    try {
        std::ifstream in(config_path);
        if (!in) throw ConfigError("cannot open config '" + config_path + "'");
        Json j;
        try {
            j = Json::parse(in);
        } catch (const nlohmann::json::parse_error& e) {
            throw ConfigError(std::string("config is not valid JSON: ") + e.what());
        }
        cfg = parse_config(j);
    } catch (const ConfigError& e) {
        log << "error: " << e.what() << '\n';
        return exit_config_error;
    }
    if (seed_override) cfg.seed = seed_override;

    const RunResult r = run(cfg);
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    const fs::path base(out_dir);
    {
        std::ofstream os(base / (cfg.command + ".json"), std::ios::binary);
        if (!os) {
            log << "error: cannot write report into '" << out_dir << "'\n";
            return exit_config_error;
        }
        report::write_json(r.report, os);
    }
    for (const auto& c : r.csv) {
        std::ofstream os(base / c.name, std::ios::binary);
        os << c.content;
    }
    if (!quiet) {
        log << cfg.command << ": " << r.report["status"].get<std::string>();
        if (!r.message.empty()) log << " (" << r.message << ")";
        log << ", report " << (base / (cfg.command + ".json")).string() << '\n';
    } else if (!r.message.empty()) {
        log << "error: " << r.message << '\n';
    }
    return r.exit_code;
}

}  // namespace hyperlab::cli
