#include "fiskit/scenario.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

namespace fiskit {

namespace {

const char* kTaskKinds[] = {"check-structure", "convexity", "bochner", "apriori",
                            "solve",           "leafwise",  "logforms"};

bool known_task(const std::string& k) {
    for (const char* t : kTaskKinds)
        if (k == t) return true;
    return false;
}

std::vector<std::string> split_components(const std::string& body, int line) {
    // "(expr, expr, ...)" with nesting-aware commas
    std::string s = body;
    auto l = s.find('(');
    auto r = s.rfind(')');
    if (l == std::string::npos || r == std::string::npos || r < l)
        throw ParseError(line, 1, "expected a parenthesized component list");
    s = s.substr(l + 1, r - l - 1);
    std::vector<std::string> out;
    int depth = 0;
    std::string cur;
    for (char ch : s) {
        if (ch == '(') ++depth;
        if (ch == ')') --depth;
        if (ch == ',' && depth == 0) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

std::map<std::string, std::string> parse_kv(std::istringstream& rest) {
    std::map<std::string, std::string> params;
    std::string tok;
    while (rest >> tok) {
        auto eq = tok.find('=');
        if (eq == std::string::npos) params[tok] = "1";
        else params[tok.substr(0, eq)] = tok.substr(eq + 1);
    }
    return params;
}

} // namespace

std::string ScenarioTask::get(const std::string& k, const std::string& dflt) const {
    auto it = params.find(k);
    return it == params.end() ? dflt : it->second;
}

double ScenarioTask::get_num(const std::string& k, double dflt) const {
    auto it = params.find(k);
    if (it == params.end()) return dflt;
    try {
        return std::stod(it->second);
    } catch (...) {
        throw Error("task parameter " + k + " is not a number: " + it->second);
    }
}

long long ScenarioTask::get_int(const std::string& k, long long dflt) const {
    auto it = params.find(k);
    if (it == params.end()) return dflt;
    try {
        return std::stoll(it->second);
    } catch (...) {
        throw Error("task parameter " + k + " is not an integer: " + it->second);
    }
}

Scenario parse_scenario_text(const std::string& text, const std::string& source) {
    Scenario s;
    s.source = source;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    bool have_version = false;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::istringstream ls(line);
        std::string word;
        if (!(ls >> word)) continue;
        if (!have_version) {
            if (word != "fiskit/1")
                throw ParseError(lineno, 1, "scenario must start with 'fiskit/1'");
            s.version = word;
            have_version = true;
            continue;
        }
        if (word == "chart") {
            CoordAxis ax;
            std::string name;
            ls >> name;
            auto kv = parse_kv(ls);
            ax.name = name;
            ax.period = kv.count("period") ? std::stod(kv["period"]) : 2.0 * 3.14159265358979323846;
            ax.resolution = kv.count("res") ? std::stoi(kv["res"]) : 16;
            s.axes.push_back(ax);
        } else if (word == "param") {
            std::string name, eq, value;
            ls >> name >> eq;
            std::getline(ls, value);
            if (eq != "=") throw ParseError(lineno, 1, "param syntax: param <name> = <number>");
            s.params[name] = std::stod(value);
        } else if (word == "frame" || word == "complement" || word == "twist") {
            std::string rest;
            std::getline(ls, rest);
            auto comps = split_components(rest, lineno);
            std::vector<ExprPtr> exprs;
            for (auto& c : comps) exprs.push_back(parse_expr(c));
            if (word == "frame") s.v_frame.push_back(std::move(exprs));
            else if (word == "complement") s.complement.push_back(std::move(exprs));
            else s.twist = std::move(exprs);
        } else if (word == "weight") {
            std::string name, eq, value;
            ls >> name >> eq;
            std::getline(ls, value);
            if (eq != "=") throw ParseError(lineno, 1, "weight syntax: weight <name> = <expr>");
            s.weights[name] = parse_expr(value);
        } else if (word == "rhs") {
            std::string name;
            ls >> name;
            std::string qtok;
            ls >> qtok;
            if (qtok.rfind("q=", 0) != 0)
                throw ParseError(lineno, 1, "rhs syntax: rhs <name> q=<level> = (exprs)");
            ScenarioRhs r;
            r.q = std::stoi(qtok.substr(2));
            std::string rest;
            std::getline(ls, rest);
            auto eq = rest.find('=');
            if (eq == std::string::npos) throw ParseError(lineno, 1, "rhs needs '= (...)'");
            for (auto& c : split_components(rest.substr(eq + 1), lineno))
                r.components.push_back(parse_expr(c));
            s.rhs[name] = std::move(r);
        } else if (word == "normal") {
            std::string kind;
            ls >> kind;
            if (!s.normal) s.normal = NormalForm{};
            if (kind == "z") {
                std::string a, b;
                ls >> a >> b;
                s.normal->z_pairs.push_back({-1, -1});
                // axis names resolved later; stash indices via names in a side list
                // encode by storing the names in t_axes temporarily is ugly; resolve now:
                s.normal->z_pairs.back().first = int(s.axes.size()); // placeholder
                s.normal->z_pairs.back().second = int(s.axes.size());
                for (std::size_t ai = 0; ai < s.axes.size(); ++ai) {
                    if (s.axes[ai].name == a) s.normal->z_pairs.back().first = int(ai);
                    if (s.axes[ai].name == b) s.normal->z_pairs.back().second = int(ai);
                }
                if (s.normal->z_pairs.back().first >= int(s.axes.size()) ||
                    s.normal->z_pairs.back().second >= int(s.axes.size()))
                    throw ParseError(lineno, 1, "normal z: unknown axis name");
            } else if (kind == "t" || kind == "y") {
                std::string a;
                ls >> a;
                int idx = -1;
                for (std::size_t ai = 0; ai < s.axes.size(); ++ai)
                    if (s.axes[ai].name == a) idx = int(ai);
                if (idx < 0) throw ParseError(lineno, 1, "normal " + kind + ": unknown axis");
                (kind == "t" ? s.normal->t_axes : s.normal->y_axes).push_back(idx);
            } else {
                throw ParseError(lineno, 1, "normal syntax: normal z|t|y <axes>");
            }
        } else if (word == "bundle") {
            auto kv = parse_kv(ls);
            if (kv.count("rank")) s.bundle_rank = std::stoi(kv["rank"]);
        } else if (word == "task") {
            ScenarioTask t;
            ls >> t.kind;
            t.line = lineno;
            t.params = parse_kv(ls);
            s.tasks.push_back(std::move(t));
        } else {
            throw ParseError(lineno, 1, "unknown directive '" + word + "'");
        }
    }
    if (!have_version) throw ParseError(1, 1, "empty scenario");
    return s;
}

Scenario parse_scenario_json(const std::string& text, const std::string& source) {
    using nlohmann::json;
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        throw ParseError(1, 1, std::string("invalid JSON: ") + e.what());
    }
    Scenario s;
    s.source = source;
    s.version = j.value("version", "fiskit/1");
    if (s.version != "fiskit/1") throw ParseError(1, 1, "unsupported version " + s.version);
    for (const auto& ax : j.at("chart"))
        s.axes.push_back({ax.at("name").get<std::string>(), ax.value("period", 6.283185307179586),
                          ax.value("res", 16)});
    if (j.count("params"))
        for (auto& [k, v] : j.at("params").items()) s.params[k] = v.get<double>();
    auto read_fields = [&](const char* key, std::vector<std::vector<ExprPtr>>& dst) {
        if (!j.count(key)) return;
        for (const auto& row : j.at(key)) {
            std::vector<ExprPtr> exprs;
            for (const auto& c : row) exprs.push_back(parse_expr(c.get<std::string>()));
            dst.push_back(std::move(exprs));
        }
    };
    read_fields("frame", s.v_frame);
    read_fields("complement", s.complement);
    if (j.count("twist")) {
        std::vector<ExprPtr> exprs;
        for (const auto& c : j.at("twist")) exprs.push_back(parse_expr(c.get<std::string>()));
        s.twist = std::move(exprs);
    }
    if (j.count("weights"))
        for (auto& [k, v] : j.at("weights").items()) s.weights[k] = parse_expr(v.get<std::string>());
    if (j.count("rhs")) {
        for (auto& [k, v] : j.at("rhs").items()) {
            ScenarioRhs r;
            r.q = v.at("q").get<int>();
            for (const auto& c : v.at("components"))
                r.components.push_back(parse_expr(c.get<std::string>()));
            s.rhs[k] = std::move(r);
        }
    }
    if (j.count("normal")) {
        NormalForm nf;
        const auto& nj = j.at("normal");
        auto axis_of = [&](const std::string& name) {
            for (std::size_t ai = 0; ai < s.axes.size(); ++ai)
                if (s.axes[ai].name == name) return int(ai);
            throw ParseError(1, 1, "normal: unknown axis " + name);
        };
        if (nj.count("z"))
            for (const auto& pr : nj.at("z"))
                nf.z_pairs.push_back({axis_of(pr.at(0).get<std::string>()),
                                      axis_of(pr.at(1).get<std::string>())});
        if (nj.count("t"))
            for (const auto& a : nj.at("t")) nf.t_axes.push_back(axis_of(a.get<std::string>()));
        if (nj.count("y"))
            for (const auto& a : nj.at("y")) nf.y_axes.push_back(axis_of(a.get<std::string>()));
        s.normal = std::move(nf);
    }
    s.bundle_rank = j.value("bundle_rank", 1);
    if (j.count("tasks")) {
        for (const auto& tj : j.at("tasks")) {
            ScenarioTask t;
            t.kind = tj.at("kind").get<std::string>();
            if (tj.count("params"))
                for (auto& [k, v] : tj.at("params").items()) {
                    if (v.is_string()) t.params[k] = v.get<std::string>();
                    else t.params[k] = v.dump();
                }
            s.tasks.push_back(std::move(t));
        }
    }
    return s;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open scenario file " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();
    std::size_t i = 0;
    while (i < text.size() && std::isspace((unsigned char)text[i])) ++i;
    Scenario s = (i < text.size() && text[i] == '{') ? parse_scenario_json(text, path)
                                                     : parse_scenario_text(text, path);
    validate_scenario(s);
    return s;
}

void validate_scenario(const Scenario& s) {
    if (s.axes.empty()) throw Error("scenario declares no chart axes");
    for (const auto& ax : s.axes) {
        if (ax.period <= 0) throw Error("axis " + ax.name + ": period must be positive");
        if (ax.resolution < 4 || ax.resolution % 2)
            throw Error("axis " + ax.name + ": resolution must be even and >= 4");
    }
    const int dim = int(s.axes.size());
    if (s.v_frame.empty() && !s.normal) throw Error("scenario declares no structure frame");
    for (const auto& row : s.v_frame)
        if (int(row.size()) != dim) throw Error("frame component count must match the chart");
    for (const auto& row : s.complement)
        if (int(row.size()) != dim)
            throw Error("complement component count must match the chart");
    if (s.twist && int(s.twist->size()) != dim)
        throw Error("twist component count must match the chart");
    if (!s.v_frame.empty() &&
        int(s.v_frame.size() + s.complement.size()) != dim)
        throw Error("frame plus complement must span the chart dimension");
    if (s.bundle_rank < 1) throw Error("bundle rank must be >= 1");
    for (const auto& t : s.tasks) {
        if (!known_task(t.kind)) throw Error("unknown task kind '" + t.kind + "'");
        if (t.kind == "solve" && !s.rhs.count(t.get("rhs", "f")))
            throw Error("solve task references missing rhs '" + t.get("rhs", "f") + "'");
        if ((t.kind == "convexity" || t.kind == "bochner" || t.kind == "apriori") &&
            !s.weights.count(t.get("weight", "phi")) && t.get("weight_mode", "") != "zero")
            throw Error(t.kind + " task references missing weight '" + t.get("weight", "phi") +
                        "'");
        long long q = t.get_int("q", 0);
        if (q < 0 || q > dim) throw Error("task parameter q out of range");
    }
}

ScenarioInstance instantiate(const Scenario& s, int resolution_override) {
    std::vector<CoordAxis> axes = s.axes;
    if (resolution_override > 0)
        for (auto& ax : axes) ax.resolution = resolution_override;
    ScenarioInstance inst;
    inst.chart = Chart::make(axes);

    std::map<std::string, double> params = s.params;
    params.emplace("pi", 3.14159265358979323846);

    if (!s.v_frame.empty()) {
        auto make_fields = [&](const std::vector<std::vector<ExprPtr>>& rows) {
            std::vector<VectorField> out;
            for (const auto& row : rows) {
                std::vector<ScalarField> comps;
                for (const auto& e : row) comps.push_back(evaluate(e, inst.chart, params));
                out.emplace_back(inst.chart, std::move(comps));
            }
            return out;
        };
        inst.structure = FIStructure::make(inst.chart, make_fields(s.v_frame),
                                           make_fields(s.complement), 1e-8, s.normal);
    } else {
        inst.structure = normal_structure(inst.chart, *s.normal);
    }
    if (inst.structure->integrable()) {
        inst.forms = structure_forms(inst.structure);
        inst.forms_valid = true;
    } else {
        inst.forms.structure = inst.structure;
        inst.forms.trace = Form(inst.chart, 1);
    }
    if (s.twist) {
        Form t(inst.chart, 1);
        for (int nu = 0; nu < inst.chart->dim(); ++nu)
            t.coeff(mi::Index{nu}) = evaluate((*s.twist)[std::size_t(nu)], inst.chart, params);
        inst.twist = check_twist(*inst.structure, t);
        if (!inst.twist.valid) throw InvalidTwist(inst.twist.residual);
    } else {
        inst.twist = check_twist(*inst.structure, Form(inst.chart, 1));
    }
    for (const auto& [name, e] : s.weights)
        inst.weights.emplace(name, evaluate(e, inst.chart, params));
    inst.params = std::move(params);
    return inst;
}

} // namespace fiskit
