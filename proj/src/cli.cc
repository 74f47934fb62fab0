// Copyright 2026 The prs-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "prslab/cli.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "prslab/combinatorics.h"
#include "prslab/condcheck.h"
#include "prslab/expand.h"
#include "prslab/moments.h"
#include "prslab/report.h"

namespace prslab {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

constexpr double kMethodTolerance = 1e-12;
constexpr double kMonotoneSlack = 1e-10;
constexpr double kAmplitudeTolerance = 1e-12;

const std::set<std::string> kGlobalKeys = {"seed", "budget-mib", "out-dir"};

/// Reads experiment configs written as JSON. Top-level keys are option names
/// (underscores allowed in place of dashes); nested objects address
/// subcommands. With a "command" key, every non-global top-level key belongs
/// to that subcommand.
class JsonConfig : public CLI::Config {
   public:
    std::string to_config(const CLI::App *app, bool default_also, bool, std::string) const override {
        ordered_json j = dump(app, default_also);
        return j.dump(2) + "\n";
    }

    std::vector<CLI::ConfigItem> from_config(std::istream &input) const override {
        json j;
        try {
            j = json::parse(input);
        } catch (const json::parse_error &e) {
            throw CLI::ConversionError("config file is not valid JSON: " + std::string(e.what()));
        }
        if (!j.is_object()) {
            throw CLI::ConversionError("config file must hold a JSON object");
        }
        std::vector<std::string> command_parents;
        if (j.contains("command")) {
            command_parents.push_back(j["command"].get<std::string>());
        }
        std::vector<CLI::ConfigItem> items;
        for (const auto &[raw_key, value] : j.items()) {
            std::string key = normalize(raw_key);
            if (key == "command") {
                continue;
            }
            if (value.is_object()) {
                walk(value, {key}, items);
                continue;
            }
            std::vector<std::string> parents = kGlobalKeys.count(key) ? std::vector<std::string>{} : command_parents;
            add_item(parents, key, value, items);
        }
        return items;
    }

   private:
    static std::string normalize(std::string key) {
        std::replace(key.begin(), key.end(), '_', '-');
        return key;
    }

    static std::string scalar(const json &v) {
        if (v.is_string()) {
            return v.get<std::string>();
        }
        if (v.is_boolean()) {
            return v.get<bool>() ? "true" : "false";
        }
        return v.dump();
    }

    static void add_item(
        const std::vector<std::string> &parents, const std::string &key, const json &value, std::vector<CLI::ConfigItem> &items) {
        if (value.is_null()) {
            return;
        }
        CLI::ConfigItem item;
        item.parents = parents;
        item.name = key;
        if (value.is_array()) {
            for (const json &v : value) {
                item.inputs.push_back(scalar(v));
            }
            if (item.inputs.empty()) {
                item.inputs.push_back("{}");
            }
        } else {
            item.inputs.push_back(scalar(value));
        }
        items.push_back(std::move(item));
    }

    static void walk(const json &obj, const std::vector<std::string> &parents, std::vector<CLI::ConfigItem> &items) {
        for (const auto &[raw_key, value] : obj.items()) {
            std::string key = normalize(raw_key);
            if (value.is_object()) {
                std::vector<std::string> deeper = parents;
                deeper.push_back(key);
                walk(value, deeper, items);
            } else {
                add_item(parents, key, value, items);
            }
        }
    }

    static ordered_json dump(const CLI::App *app, bool default_also) {
        ordered_json j = ordered_json::object();
        for (const CLI::Option *opt : app->get_options()) {
            if (opt->get_lnames().empty() || !opt->get_configurable()) {
                continue;
            }
            std::vector<std::string> values = opt->as<std::vector<std::string>>();
            if (values.empty() && default_also && !opt->get_default_str().empty()) {
                values.push_back(opt->get_default_str());
            }
            if (values.empty()) {
                continue;
            }
            if (values.size() == 1 && opt->get_expected_max() <= 1) {
                j[opt->get_lnames().front()] = values.front();
            } else {
                j[opt->get_lnames().front()] = values;
            }
        }
        for (const CLI::App *sub : app->get_subcommands({})) {
            if (sub->parsed()) {
                j[sub->get_name()] = dump(sub, default_also);
            }
        }
        return j;
    }
};

struct Globals {
    std::optional<uint64_t> seed;
    uint64_t budget_mib = 0;
    std::string out_dir = ".";
};

/// Raised for configurations that fail validation (exit status 2).
class UsageError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

/// Raised by suites whose assertions fail (exit status 1); the message names them.
class AssertionFailure : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

MemoryBudget budget_of(const Globals &g) {
    return g.budget_mib ? MemoryBudget::from_mib(g.budget_mib) : MemoryBudget::from_environment();
}

uint64_t require_seed(const Globals &g, const std::string &why) {
    if (!g.seed) {
        throw UsageError("--seed is required when " + why);
    }
    return *g.seed;
}

FunctionSpaceSpec make_space(const std::string &name, uint64_t count, const Globals &g) {
    if (name == "exhaustive") {
        return ExhaustiveSpace{};
    }
    if (name != "prf" && name != "uniform") {
        throw UsageError("unknown function space '" + name + "' (expected exhaustive, prf, uniform)");
    }
    if (count == 0) {
        throw UsageError("--count must be positive for a sampled function space");
    }
    uint64_t seed = require_seed(g, "sampling functions from the '" + name + "' space");
    if (name == "prf") {
        return PrfKeySpace{count, seed};
    }
    return UniformSampleSpace{count, seed};
}

std::filesystem::path output_path(const Globals &g, const std::string &name) {
    std::filesystem::path dir(g.out_dir);
    std::filesystem::create_directories(dir);
    return dir / name;
}

void write_text(const std::filesystem::path &path, const std::string &text) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) {
        throw std::runtime_error("cannot write " + path.string());
    }
    f << text;
    if (!f) {
        throw std::runtime_error("write failed for " + path.string());
    }
}

void write_json(const std::filesystem::path &path, const ordered_json &j) {
    write_text(path, j.dump(2) + "\n");
}

template <typename T>
std::string parameter_text(const T &value) {
    std::ostringstream s;
    s << value;
    return s.str();
}

// ---------------------------------------------------------------------------
// moments

struct MomentsArgs {
    std::string source = "plain";
    std::string kind = "binary";
    size_t n = 2;
    size_t i = 1;
    size_t t = 1;
    std::string space = "exhaustive";
    uint64_t count = 0;
    std::string method = "bruteforce";
    size_t batches = 16;
    bool no_final_layer = false;
    bool json = false;
    bool include_moment = false;
    bool canonical = false;
    unsigned threads = 0;
    std::string output = "moments.csv";
};

MomentSpec moment_spec_of(const std::string &source, const std::string &kind, size_t n, size_t i, size_t t,
                          const FunctionSpaceSpec &space, bool final_layer) {
    MomentSpec spec;
    spec.source = parse_moment_source(source);
    spec.kind = parse_prs_kind(kind);
    spec.n = n;
    spec.i = spec.source == MomentSource::kPlainPrs || spec.source == MomentSource::kConstruction2 ? 0 : i;
    spec.t = t;
    spec.space = space;
    spec.final_layer = final_layer;
    return spec;
}

int run_moments(const MomentsArgs &a, const Globals &g, std::ostream &out) {
    MomentMethod method = parse_moment_method(a.method);
    FunctionSpaceSpec space = make_space(a.space, a.count, g);
    if (method == MomentMethod::kMonteCarlo) {
        require_seed(g, "using the Monte Carlo method");
    }
    MomentSpec spec = moment_spec_of(a.source, a.kind, a.n, a.i, a.t, space, !a.no_final_layer);
    MomentOptions options;
    options.budget = budget_of(g);
    options.threads = a.threads;
    options.batches = a.batches;
    MomentReport report = compare_to_haar(spec, method, options);

    std::string header = csv_line(moment_csv_columns());
    std::string row = csv_line(moment_csv_fields(report, a.canonical));
    write_text(output_path(g, a.output), csv_schema_line() + "\n" + header + "\n" + row + "\n");
    if (a.json) {
        std::filesystem::path p = output_path(g, a.output);
        p.replace_extension(".json");
        write_json(p, to_json(report, a.canonical, a.include_moment));
    }
    out << header << "\n" << row << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// expand-check

struct ExpandArgs {
    size_t n = 2;
    size_t i = 1;
    uint64_t count = 100;
    size_t max_exhaustive_n = 3;
    std::string output = "expand_check.json";
};

int run_expand_check(const ExpandArgs &a, const Globals &g, std::ostream &out) {
    if (a.i < 1 || a.i >= a.n) {
        throw UsageError("expand-check needs 1 <= i < n");
    }
    bool exhaustive = a.n <= a.max_exhaustive_n;
    FunctionSpaceSpec space = exhaustive ? FunctionSpaceSpec{ExhaustiveSpace{}}
                                         : FunctionSpaceSpec{UniformSampleSpace{a.count, require_seed(g, "n exceeds the exhaustive range")}};
    FunctionSource functions(space, a.n, 2);
    MemoryBudget budget = budget_of(g);
    double max_dev = 0;
    uint64_t worst = 0;
    for (uint64_t k = 0; k < functions.count(); k++) {
        BooleanFunction f = functions.at(k);
        PureState circuit = evaluate(construction1(f, a.n, a.i, PrsKind::kBinaryPhase), budget);
        PureState closed = closed_form_construction1(f, a.n, a.i);
        double dev = max_amplitude_deviation(circuit, closed);
        if (dev > max_dev) {
            max_dev = dev;
            worst = k;
        }
    }
    bool passed = max_dev <= kAmplitudeTolerance;
    ordered_json j;
    j["n"] = a.n;
    j["i"] = a.i;
    j["function_space"] = describe(space);
    j["functions"] = functions.count();
    j["max_deviation"] = max_dev;
    j["worst_function"] = functions.at(worst).to_hex();
    j["tolerance"] = kAmplitudeTolerance;
    j["passed"] = passed;
    write_json(output_path(g, a.output), j);
    out << "expand-check n=" << a.n << " i=" << a.i << " functions=" << functions.count()
        << " max_deviation=" << format_number(max_dev) << (passed ? " PASS" : " FAIL") << "\n";
    if (!passed) {
        throw AssertionFailure("circuit and closed form differ by " + format_number(max_dev));
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// lemmas

struct LemmaArgs {
    size_t max_n = 8;
    size_t max_t = 8;
    std::string output = "lemmas.json";
};

/// Restricted growth strings of length t: one tuple per set partition of the positions.
void for_each_shape(size_t t, const std::function<void(const std::vector<uint64_t> &)> &fn) {
    std::vector<uint64_t> a(t, 0);
    std::function<void(size_t, uint64_t)> rec = [&](size_t pos, uint64_t max_label) {
        if (pos == t) {
            fn(a);
            return;
        }
        for (uint64_t v = 0; v <= max_label + 1; v++) {
            a[pos] = v;
            rec(pos + 1, std::max(max_label, v));
        }
    };
    if (t == 0) {
        return;
    }
    a[0] = 0;
    rec(1, 0);
}

int run_lemmas(const LemmaArgs &a, const Globals &g, std::ostream &out) {
    if (a.max_n < 1 || a.max_t < 1) {
        throw UsageError("lemmas needs --max-n >= 1 and --max-t >= 1");
    }
    ordered_json j;
    std::vector<std::string> failures;

    ordered_json dist = ordered_json::array();
    for (size_t n = 1; n <= a.max_n; n++) {
        for (size_t t = 1; t <= a.max_t; t++) {
            ordered_json e;
            e["n"] = n;
            e["t"] = t;
            e["bound"] = to_string(dist_lower_bound(n, t));
            try {
                e["count"] = to_string(dist_count(n, t));
                e["holds"] = true;
            } catch (const std::logic_error &err) {
                e["holds"] = false;
                failures.push_back(err.what());
            }
            dist.push_back(e);
        }
    }
    j["dist"] = dist;

    size_t perm_t = std::min<size_t>(a.max_t, 6);
    ordered_json perm = ordered_json::array();
    for (size_t t = 1; t <= perm_t; t++) {
        size_t bits = 1;
        while ((uint64_t{1} << bits) < t) {
            bits++;
        }
        for_each_shape(t, [&](const std::vector<uint64_t> &tuple) {
            ordered_json e;
            e["elements"] = tuple;
            BigInt bound = perm_state_norm_bound(tuple);
            BigInt classes = perm_state_norm_sq_by_classes(tuple);
            e["bound"] = to_string(bound);
            e["by_classes"] = to_string(classes);
            try {
                Rational norm = perm_state_norm_sq(tuple);
                e["norm_sq"] = to_string(norm);
                if (norm != Rational(classes)) {
                    failures.push_back("class-size route disagrees for t=" + std::to_string(t));
                }
            } catch (const std::logic_error &err) {
                failures.push_back(err.what());
            }
            if (t <= 4) {
                double dense = perm_state_norm_sq_dense(tuple, bits);
                e["dense"] = dense;
                if (std::abs(dense - classes.convert_to<double>()) > 1e-12) {
                    failures.push_back("dense norm disagrees for t=" + std::to_string(t));
                }
            }
            perm.push_back(e);
        });
    }
    j["permutation_states"] = perm;
    j["failures"] = failures;
    j["passed"] = failures.empty();
    write_json(output_path(g, a.output), j);
    out << "lemmas: " << dist.size() << " Dist cases, " << perm.size() << " permutation shapes (t <= " << perm_t
        << "), " << failures.size() << " failures\n";
    if (!failures.empty()) {
        throw AssertionFailure(failures.front());
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// good-census

struct CensusArgs {
    std::vector<size_t> n = {3};
    std::vector<size_t> i = {1};
    std::vector<size_t> t = {2};
    std::string output = "good_census.csv";
};

int run_good_census(const CensusArgs &a, const Globals &g, std::ostream &out) {
    std::ostringstream csv;
    csv << csv_schema_line() << "\n" << csv_line(census_csv_columns()) << "\n";
    ordered_json details = ordered_json::array();
    std::vector<std::string> failures;
    for (size_t n : a.n) {
        for (size_t i : a.i) {
            for (size_t t : a.t) {
                GoodCensus c = good_census(n, i, t);
                csv << csv_line(census_csv_fields(c)) << "\n";
                details.push_back(to_json(c));
                std::string where = "(n=" + std::to_string(n) + ", i=" + std::to_string(i) + ", t=" + std::to_string(t) + ")";
                if (c.dist_members != c.dist_formula) {
                    failures.push_back("Dist scan disagrees with the formula at " + where);
                }
                if (c.slack < 0) {
                    failures.push_back("|Good| is below its bound at " + where);
                }
                if (!c.recombination_complete()) {
                    failures.push_back(std::to_string(c.ambiguous) + " ambiguous and " + std::to_string(c.wrong_decode) +
                                       " wrong recombinations at " + where);
                }
                out << "good-census " << where << " |Good|=" << to_string(c.good_members)
                    << " roundtrip=" << c.roundtrip_ok << " ambiguous=" << c.ambiguous
                    << " rejected=" << c.non_good_rejected << "/" << c.non_good_total << "\n";
            }
        }
    }
    std::filesystem::path csv_path = output_path(g, a.output);
    write_text(csv_path, csv.str());
    std::filesystem::path json_path = csv_path;
    json_path.replace_extension(".json");
    ordered_json j;
    j["censuses"] = details;
    j["failures"] = failures;
    write_json(json_path, j);
    if (!failures.empty()) {
        throw AssertionFailure(failures.front());
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// condition

struct ConditionArgs {
    std::string witness = "binary";
    size_t n = 2;
    std::string space = "exhaustive";
    uint64_t count = 0;
    std::optional<double> scale;
    std::string output = "condition.json";
};

int run_condition(const ConditionArgs &a, const Globals &g, std::ostream &out) {
    ConditionWitness w;
    PrsKind kind;
    if (a.witness == "binary") {
        kind = PrsKind::kBinaryPhase;
        w = binary_witness(a.n);
    } else if (a.witness == "general") {
        kind = PrsKind::kGeneralPhase;
        w = general_witness(a.n);
    } else if (a.witness == "identity-binary") {
        kind = PrsKind::kBinaryPhase;
        w = identity_shift_witness(kind, a.n);
    } else if (a.witness == "identity-general") {
        kind = PrsKind::kGeneralPhase;
        w = identity_shift_witness(kind, a.n);
    } else {
        throw UsageError("unknown witness '" + a.witness + "'");
    }
    if (a.scale) {
        w.scale = *a.scale;
    }
    FunctionSource functions(make_space(a.space, a.count, g), a.n, phase_modulus(kind, a.n));
    ConditionReport c1 = check_cond1(phase_prs_factory(kind), w, a.n, functions);
    ConditionReport c2 = check_cond2(w, a.n);
    ordered_json j;
    j["witness"] = w.name;
    j["n"] = a.n;
    j["function_space"] = describe(functions.spec());
    j["passed"] = c1.passed() && c2.passed();
    j["reports"] = {to_json(c1), to_json(c2)};
    write_json(output_path(g, a.output), j);
    for (const ConditionReport *r : {&c1, &c2}) {
        out << "condition " << r->condition << " witness=" << r->witness << " n=" << r->n << " checked=" << r->checked
            << " failures=" << r->failure_count << " max_deviation=" << format_number(r->max_deviation)
            << (r->passed() ? " PASS" : " FAIL") << "\n";
    }
    if (!c1.passed() || !c2.passed()) {
        throw AssertionFailure("witness '" + w.name + "' fails the generalization condition");
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// sweep

struct SweepArgs {
    std::vector<std::string> sources = {"construction1"};
    std::vector<std::string> kinds = {"binary"};
    std::vector<size_t> n;
    std::vector<size_t> i = {1};
    std::vector<size_t> t = {2};
    std::vector<std::string> methods = {"deltapair"};
    std::string space = "exhaustive";
    uint64_t count = 0;
    size_t batches = 16;
    bool no_final_layer = false;
    bool canonical = false;
    bool expect_nonincreasing = false;
    unsigned threads = 0;
    std::string output = "sweep.csv";
};

struct SweepPoint {
    MomentSource source;
    PrsKind kind;
    size_t n;
    size_t i;
    size_t t;

    auto key() const {
        return std::make_tuple(to_string(source), to_string(kind), n, i, t);
    }
};

ordered_json point_json(const SweepPoint &p, const std::string &method) {
    ordered_json j;
    j["source"] = to_string(p.source);
    j["kind"] = to_string(p.kind);
    j["n"] = p.n;
    j["i"] = p.i;
    j["t"] = p.t;
    j["method"] = method;
    return j;
}

int run_sweep(const SweepArgs &a, const Globals &g, std::ostream &out) {
    FunctionSpaceSpec space = make_space(a.space, a.count, g);
    std::vector<MomentMethod> methods;
    for (const std::string &m : a.methods) {
        methods.push_back(parse_moment_method(m));
    }
    std::sort(methods.begin(), methods.end(), [](MomentMethod x, MomentMethod y) { return to_string(x) < to_string(y); });
    methods.erase(std::unique(methods.begin(), methods.end()), methods.end());
    if (std::count(methods.begin(), methods.end(), MomentMethod::kMonteCarlo)) {
        require_seed(g, "using the Monte Carlo method");
    }

    std::vector<SweepPoint> points;
    for (const std::string &s : a.sources) {
        MomentSource source = parse_moment_source(s);
        for (const std::string &k : a.kinds) {
            PrsKind kind = parse_prs_kind(k);
            for (size_t n : a.n) {
                for (size_t i : a.i) {
                    size_t used_i = source == MomentSource::kPlainPrs || source == MomentSource::kConstruction2 ? 0 : i;
                    for (size_t t : a.t) {
                        points.push_back({source, kind, n, used_i, t});
                    }
                }
            }
        }
    }
    std::sort(points.begin(), points.end(), [](const SweepPoint &x, const SweepPoint &y) { return x.key() < y.key(); });
    points.erase(std::unique(points.begin(), points.end(), [](const SweepPoint &x, const SweepPoint &y) {
                     return x.key() == y.key();
                 }),
                 points.end());

    MomentOptions options;
    options.budget = budget_of(g);
    options.threads = a.threads;
    options.batches = a.batches;

    std::filesystem::path csv_path = output_path(g, a.output);
    std::ofstream csv(csv_path, std::ios::binary | std::ios::trunc);
    if (!csv) {
        throw std::runtime_error("cannot write " + csv_path.string());
    }
    std::vector<std::string> columns = moment_csv_columns();
    columns.push_back("method_max_diff");
    csv << csv_schema_line() << "\n" << csv_line(columns) << "\n" << std::flush;

    ordered_json failed = ordered_json::array();
    std::vector<std::string> assertions;
    // (source, kind, i, t, method) -> [(n, distance)] for the monotonicity check.
    std::map<std::tuple<std::string, std::string, size_t, size_t, std::string>, std::vector<std::pair<size_t, double>>> trends;
    size_t rows = 0;

    for (const SweepPoint &p : points) {
        MomentSpec spec;
        spec.source = p.source;
        spec.kind = p.kind;
        spec.n = p.n;
        spec.i = p.i;
        spec.t = p.t;
        spec.space = space;
        spec.final_layer = !a.no_final_layer;

        std::vector<std::unique_ptr<MomentReport>> reports;
        for (MomentMethod m : methods) {
            try {
                reports.push_back(std::make_unique<MomentReport>(compare_to_haar(spec, m, options)));
            } catch (const std::exception &e) {
                reports.push_back(nullptr);
                ordered_json f = point_json(p, to_string(m));
                f["error"] = e.what();
                failed.push_back(f);
                out << "sweep: point failed: " << e.what() << "\n";
            }
        }

        std::string equivalence;
        const MomentReport *bf = nullptr;
        const MomentReport *dp = nullptr;
        for (size_t k = 0; k < methods.size(); k++) {
            if (!reports[k]) {
                continue;
            }
            if (methods[k] == MomentMethod::kBruteForce) {
                bf = reports[k].get();
            } else if (methods[k] == MomentMethod::kDeltaPairing) {
                dp = reports[k].get();
            }
        }
        if (bf && dp) {
            double diff = (bf->moment.matrix() - dp->moment.matrix()).cwiseAbs().maxCoeff();
            equivalence = format_number(diff);
            if (diff > kMethodTolerance) {
                assertions.push_back("methods disagree by " + equivalence + " at " + point_json(p, "").dump());
            }
        }

        for (size_t k = 0; k < methods.size(); k++) {
            if (!reports[k]) {
                continue;
            }
            std::vector<std::string> fields = moment_csv_fields(*reports[k], a.canonical);
            fields.push_back(equivalence);
            csv << csv_line(fields) << "\n" << std::flush;
            rows++;
            trends[{to_string(p.source), to_string(p.kind), p.i, p.t, to_string(methods[k])}].emplace_back(
                p.n, reports[k]->haar_distance);
        }
    }

    if (a.expect_nonincreasing) {
        for (const auto &[group, series] : trends) {
            for (size_t k = 1; k < series.size(); k++) {
                if (series[k].second > series[k - 1].second + kMonotoneSlack) {
                    assertions.push_back("haar_distance increases from n=" + std::to_string(series[k - 1].first) +
                                         " to n=" + std::to_string(series[k].first) + " for " + std::get<0>(group) +
                                         " i=" + std::to_string(std::get<2>(group)) + " t=" +
                                         std::to_string(std::get<3>(group)));
                }
            }
        }
    }

    out << "sweep: " << rows << " rows written to " << csv_path.string() << "\n";
    if (!failed.empty() || !assertions.empty()) {
        std::filesystem::path manifest = csv_path;
        manifest.replace_extension(".failures.json");
        ordered_json j;
        j["failed_points"] = failed;
        j["assertions"] = assertions;
        write_json(manifest, j);
        out << "sweep: failure manifest written to " << manifest.string() << "\n";
        if (!failed.empty()) {
            return kExitRuntimeError;
        }
        throw AssertionFailure(assertions.front());
    }
    return kExitOk;
}

}  // namespace

namespace {

/// The "command" key of a --config file when the command line names no subcommand.
std::optional<std::string> config_command(const std::vector<std::string> &args) {
    static const std::set<std::string> kCommands = {
        "moments", "expand-check", "lemmas", "good-census", "condition", "sweep"};
    std::string path;
    for (size_t k = 0; k < args.size(); k++) {
        if (kCommands.count(args[k])) {
            return std::nullopt;
        }
        if (args[k] == "--config" && k + 1 < args.size()) {
            path = args[k + 1];
        } else if (args[k].rfind("--config=", 0) == 0) {
            path = args[k].substr(9);
        }
    }
    if (path.empty()) {
        return std::nullopt;
    }
    std::ifstream in(path);
    json j = json::parse(in, nullptr, false);
    if (j.is_object() && j.contains("command") && j["command"].is_string()) {
        return j["command"].get<std::string>();
    }
    return std::nullopt;
}

}  // namespace

int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    CLI::App app("Desk-scale simulator for phase pseudorandom quantum states and their expansions", "prslab");
    app.require_subcommand(1, 1);
    app.fallthrough();
    app.config_formatter(std::make_shared<JsonConfig>());
    app.set_config("--config", "", "JSON experiment config; command-line flags take precedence");

    Globals g;
    uint64_t seed_value = 0;
    CLI::Option *seed_opt = app.add_option("--seed", seed_value, "Seed for sampled function spaces and Monte Carlo");
    app.add_option("--budget-mib", g.budget_mib, "Memory budget in MiB (default: $PRS_LAB_BUDGET_MIB or 2048)")
        ->check(CLI::PositiveNumber);
    app.add_option("--out-dir", g.out_dir, "Directory for CSV/JSON artifacts")->capture_default_str();

    MomentsArgs ma;
    CLI::App *moments = app.add_subcommand("moments", "t-copy moment of one ensemble and its distance to Haar");
    moments->add_option("--source", ma.source, "plain, construction1, construction2, construction3")->capture_default_str();
    moments->add_option("--kind", ma.kind, "binary or general")->capture_default_str();
    moments->add_option("--n", ma.n, "Block width")->capture_default_str();
    moments->add_option("--i", ma.i, "Added qubits (construction1) or block count (construction3)")->capture_default_str();
    moments->add_option("--t", ma.t, "Copies")->capture_default_str()->check(CLI::PositiveNumber);
    moments->add_option("--space", ma.space, "exhaustive, prf, uniform")->capture_default_str();
    moments->add_option("--count", ma.count, "Members of a sampled space");
    moments->add_option("--method", ma.method, "bruteforce, deltapair, montecarlo")->capture_default_str();
    moments->add_option("--batches", ma.batches, "Monte Carlo batches")->capture_default_str();
    moments->add_flag("--no-final-layer", ma.no_final_layer, "Omit the construction's final Fourier layer");
    moments->add_flag("--json", ma.json, "Also write a JSON report next to the CSV");
    moments->add_flag("--include-moment", ma.include_moment, "Put the full moment matrix in the JSON report");
    moments->add_flag("--canonical", ma.canonical, "Write runtime_ms as 0");
    moments->add_option("--threads", ma.threads, "Worker threads (0 = all cores)");
    moments->add_option("--output", ma.output, "CSV file name inside --out-dir")->capture_default_str();

    ExpandArgs ea;
    CLI::App *expand = app.add_subcommand("expand-check", "Compare the construction 1 circuit with its closed form");
    expand->add_option("--n", ea.n, "Block width")->capture_default_str();
    expand->add_option("--i", ea.i, "Added qubits")->capture_default_str();
    expand->add_option("--count", ea.count, "Random functions when n is beyond the exhaustive range")->capture_default_str();
    expand->add_option("--max-exhaustive-n", ea.max_exhaustive_n, "Largest n checked over every function")->capture_default_str();
    expand->add_option("--output", ea.output, "JSON file name inside --out-dir")->capture_default_str();

    LemmaArgs la;
    CLI::App *lemmas = app.add_subcommand("lemmas", "Exact checks of the Dist count and permutation-state norm bounds");
    lemmas->add_option("--max-n", la.max_n, "Largest string length for Dist counts")->capture_default_str();
    lemmas->add_option("--max-t", la.max_t, "Largest tuple length (permutation states stop at 6)")->capture_default_str();
    lemmas->add_option("--output", la.output, "JSON file name inside --out-dir")->capture_default_str();

    CensusArgs ca;
    CLI::App *census = app.add_subcommand("good-census", "Exhaustive Dist/Good census and recombination round trip");
    census->add_option("--n", ca.n, "String lengths")->capture_default_str()->expected(1, -1);
    census->add_option("--i", ca.i, "Prefix lengths")->capture_default_str()->expected(1, -1);
    census->add_option("--t", ca.t, "Tuple lengths")->capture_default_str()->expected(1, -1);
    census->add_option("--output", ca.output, "CSV file name inside --out-dir")->capture_default_str();

    ConditionArgs cda;
    double scale_value = 0;
    CLI::App *condition = app.add_subcommand("condition", "Check both parts of the generalization condition");
    condition->add_option("--witness", cda.witness, "binary, general, identity-binary, identity-general")
        ->capture_default_str();
    condition->add_option("--n", cda.n, "Qubits")->capture_default_str();
    condition->add_option("--space", cda.space, "exhaustive, prf, uniform")->capture_default_str();
    condition->add_option("--count", cda.count, "Members of a sampled space");
    CLI::Option *scale_opt = condition->add_option("--scale", scale_value, "Override the witness scale");
    condition->add_option("--output", cda.output, "JSON file name inside --out-dir")->capture_default_str();

    SweepArgs sa;
    CLI::App *sweep = app.add_subcommand("sweep", "Moments over a parameter grid, one CSV row per point and method");
    sweep->add_option("--source", sa.sources, "Sources")->capture_default_str()->expected(0, -1);
    sweep->add_option("--kind", sa.kinds, "Kinds")->capture_default_str()->expected(0, -1);
    sweep->add_option("--n", sa.n, "Block widths")->default_str("{}")->expected(0, -1);
    sweep->add_option("--i", sa.i, "Added qubits / block counts")->capture_default_str()->expected(0, -1);
    sweep->add_option("--t", sa.t, "Copies")->capture_default_str()->expected(0, -1);
    sweep->add_option("--method", sa.methods, "Methods")->capture_default_str()->expected(0, -1);
    sweep->add_option("--space", sa.space, "exhaustive, prf, uniform")->capture_default_str();
    sweep->add_option("--count", sa.count, "Members of a sampled space");
    sweep->add_option("--batches", sa.batches, "Monte Carlo batches")->capture_default_str();
    sweep->add_flag("--no-final-layer", sa.no_final_layer, "Omit the final Fourier layer");
    sweep->add_flag("--canonical", sa.canonical, "Write runtime_ms as 0 for byte-stable output");
    sweep->add_flag("--expect-nonincreasing", sa.expect_nonincreasing, "Fail if haar_distance grows with n");
    sweep->add_option("--threads", sa.threads, "Worker threads (0 = all cores)");
    sweep->add_option("--output", sa.output, "CSV file name inside --out-dir")->capture_default_str();

    std::vector<std::string> args(argv + 1, argv + argc);
    if (auto command = config_command(args)) {
        args.insert(args.begin(), *command);
    }
    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }
    if (seed_opt->count() > 0) {
        g.seed = seed_value;
    }
    if (scale_opt->count() > 0) {
        cda.scale = scale_value;
    }

    try {
        if (moments->parsed()) {
            return run_moments(ma, g, out);
        }
        if (expand->parsed()) {
            return run_expand_check(ea, g, out);
        }
        if (lemmas->parsed()) {
            return run_lemmas(la, g, out);
        }
        if (census->parsed()) {
            return run_good_census(ca, g, out);
        }
        if (condition->parsed()) {
            return run_condition(cda, g, out);
        }
        return run_sweep(sa, g, out);
    } catch (const AssertionFailure &e) {
        err << "prslab: assertion failed: " << e.what() << "\n";
        return kExitAssertionFailed;
    } catch (const BudgetError &e) {
        err << "prslab: " << e.what() << "\n";
        return kExitRuntimeError;
    } catch (const UsageError &e) {
        err << "prslab: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument &e) {
        err << "prslab: invalid argument: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception &e) {
        err << "prslab: " << e.what() << "\n";
        return kExitRuntimeError;
    }
}

}  // namespace prslab
