#include "omegadim/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace omegadim {

namespace {

std::string rat(const BigRat& x) { return format_rat(x); }

BigRat unrat(const Json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_string())
        throw ValidationError(std::string("missing rational field: ") + key);
    return parse_rat(j[key].get<std::string>());
}

ModulusSpec modulus_from_json(const Json& j) {
    if (j.is_string()) return ModulusSpec::parse(j.get<std::string>());
    // Inline table form.
    if (j.is_object() && j.contains("table")) {
        std::vector<std::pair<BigRat, BigRat>> pts;
        for (const auto& row : j["table"])
            pts.emplace_back(parse_rat(row[0].get<std::string>()),
                             parse_rat(row[1].get<std::string>()));
        return ModulusSpec::table(std::move(pts));
    }
    throw ValidationError("unrecognised modulus JSON");
}

Json modulus_to_json(const ModulusSpec& m) {
    if (m.kind() != ModulusKind::table) return Json(m.describe());
    Json rows = Json::array();
    for (const auto& [t, w] : m.points()) rows.push_back(Json::array({rat(t), rat(w)}));
    Json j;
    j["table"] = rows;
    return j;
}

}  // namespace

double round12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return std::atof(buf);
}

Json function_to_json(const LazyPLF& f) {
    Json blocks = Json::array();
    for (const auto& b : f.blocks()) {
        std::visit(
            [&](const auto& blk) {
                using T = std::decay_t<decltype(blk)>;
                Json jb;
                if constexpr (std::is_same_v<T, ConstantBlock>) {
                    jb["type"] = "constant";
                    jb["x0"] = rat(blk.x0);
                    jb["x1"] = rat(blk.x1);
                    jb["y"] = rat(blk.y);
                } else if constexpr (std::is_same_v<T, SawtoothBlock>) {
                    jb["type"] = "sawtooth";
                    jb["x0"] = rat(blk.x0);
                    jb["x1"] = rat(blk.x1);
                    jb["width"] = rat(blk.width);
                    jb["teeth"] = blk.teeth.get_str();
                    jb["y_top"] = rat(blk.y_top);
                    jb["y_bottom"] = rat(blk.y_bottom);
                    jb["phase"] = "start_top";
                } else {
                    jb["type"] = "explicit";
                    Json pts = Json::array();
                    for (const auto& [px, py] : blk.pts)
                        pts.push_back(Json::array({rat(px), rat(py)}));
                    jb["points"] = pts;
                }
                blocks.push_back(std::move(jb));
            },
            b);
    }
    Json j;
    j["type"] = "plf";
    j["blocks"] = blocks;
    return j;
}

LazyPLF function_from_json(const Json& j) {
    if (!j.contains("blocks") || !j["blocks"].is_array())
        throw ValidationError("function JSON needs a blocks array");
    std::vector<Block> blocks;
    for (const auto& jb : j["blocks"]) {
        std::string type = jb.value("type", "");
        if (type == "constant") {
            blocks.push_back(ConstantBlock{unrat(jb, "x0"), unrat(jb, "x1"), unrat(jb, "y")});
        } else if (type == "sawtooth") {
            SawtoothBlock s;
            s.x0 = unrat(jb, "x0");
            s.x1 = unrat(jb, "x1");
            s.width = unrat(jb, "width");
            if (!jb.contains("teeth")) throw ValidationError("sawtooth block needs teeth");
            s.teeth = BigInt(jb["teeth"].get<std::string>());
            s.y_top = unrat(jb, "y_top");
            s.y_bottom = unrat(jb, "y_bottom");
            blocks.push_back(std::move(s));
        } else if (type == "explicit") {
            ExplicitBlock e;
            for (const auto& row : jb["points"])
                e.pts.emplace_back(parse_rat(row[0].get<std::string>()),
                                   parse_rat(row[1].get<std::string>()));
            blocks.push_back(std::move(e));
        } else {
            throw ValidationError("unknown block type: " + type);
        }
    }
    return LazyPLF(std::move(blocks));
}

LazyPLF function_from_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open function CSV: " + path);
    std::vector<std::pair<BigRat, BigRat>> pts;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        auto comma = line.find(',');
        if (comma == std::string::npos) throw ValidationError("bad CSV row: " + line);
        std::string a = line.substr(0, comma), b = line.substr(comma + 1);
        while (!b.empty() && (b.back() == '\r' || b.back() == ' ')) b.pop_back();
        if (first) {
            first = false;
            try {
                pts.emplace_back(parse_rat(a), parse_rat(b));
            } catch (const ValidationError&) {
                continue;  // header row
            }
            continue;
        }
        pts.emplace_back(parse_rat(a), parse_rat(b));
    }
    if (pts.size() < 2) throw ValidationError("function CSV needs at least two rows");
    if (pts.front().first != 0 || pts.back().first != 1)
        throw ValidationError("function CSV must cover [0,1]");
    return LazyPLF::from_points(std::move(pts));
}

Json certificate_to_json(const Certificate& c) {
    Json entries = Json::array();
    for (const auto& e : c.entries) {
        Json je;
        je["name"] = e.name;
        je["detail"] = e.detail;
        je["exact"] = e.exact;
        je["pass"] = e.pass;
        je["margin_log2"] = round12(e.margin_log2);
        entries.push_back(std::move(je));
    }
    Json j;
    j["all_pass"] = c.all_pass();
    j["log_precision"] = "inexact margins use long-double logs, 12 significant digits";
    j["entries"] = entries;
    return j;
}

namespace {

Json spectrum_stage_to_json(const SpectrumStage& st) {
    Json js;
    js["k"] = st.k;
    js["epsilon"] = rat(st.epsilon);
    js["teeth"] = st.teeth.get_str();
    js["scale_log2"] = st.scale_log2;
    js["tooth_width"] = rat(st.tooth_width);
    js["oscillation"] = rat(st.oscillation);
    js["width"] = rat(st.width);
    js["y0"] = rat(st.y0);
    js["y_mid"] = rat(st.y_mid);
    js["y1"] = rat(st.y1);
    js["center"] = rat(st.center);
    return js;
}

}  // namespace

Json spectrum_plan_to_json(const SpectrumPlan& p) {
    Json j;
    j["type"] = "spectrum_plan";
    j["modulus"] = modulus_to_json(p.modulus);
    j["theta"] = rat(p.theta);
    j["delta"] = rat(p.delta);
    j["epsilon"] = rat(p.epsilon);
    j["mode"] = p.mode == PlanMode::strict ? "strict" : "toy";
    j["eta"] = round12(p.eta);
    j["precision_bits"] = p.precision_bits;
    Json stages = Json::array();
    for (const auto& st : p.stages) stages.push_back(spectrum_stage_to_json(st));
    j["stages"] = stages;
    j["certificate"] = certificate_to_json(p.certificate);
    return j;
}

SpectrumPlan spectrum_plan_from_json(const Json& j) {
    SpectrumPlan p;
    p.modulus = modulus_from_json(j.at("modulus"));
    p.theta = unrat(j, "theta");
    p.delta = unrat(j, "delta");
    p.epsilon = unrat(j, "epsilon");
    p.mode = j.value("mode", "strict") == "toy" ? PlanMode::toy : PlanMode::strict;
    p.eta = j.value("eta", 0.0);
    p.precision_bits = j.value("precision_bits", 128L);
    for (const auto& js : j.at("stages")) {
        SpectrumStage st;
        st.k = js.at("k").get<int>();
        st.epsilon = unrat(js, "epsilon");
        st.teeth = BigInt(js.at("teeth").get<std::string>());
        st.scale_log2 = js.value("scale_log2", 0L);
        st.tooth_width = unrat(js, "tooth_width");
        st.oscillation = unrat(js, "oscillation");
        st.width = unrat(js, "width");
        st.y0 = unrat(js, "y0");
        st.y_mid = unrat(js, "y_mid");
        st.y1 = unrat(js, "y1");
        st.center = unrat(js, "center");
        p.stages.push_back(std::move(st));
    }
    p.certificate = replay_spectrum_certificate(p);
    return p;
}

namespace {

Json assouad_stage_to_json(const AssouadStage& st) {
    Json js;
    js["k"] = st.k;
    js["epsilon"] = rat(st.epsilon);
    js["scale_log2"] = st.scale_log2;
    js["tooth_width"] = rat(st.tooth_width);
    js["height"] = rat(st.height);
    js["y0"] = rat(st.y0);
    js["y_mid"] = rat(st.y_mid);
    js["y1"] = rat(st.y1);
    js["center"] = rat(st.center);
    return js;
}

}  // namespace

Json assouad_plan_to_json(const AssouadPlan& p) {
    Json j;
    j["type"] = "assouad_plan";
    j["modulus"] = modulus_to_json(p.modulus);
    j["epsilon"] = rat(p.epsilon);
    j["mode"] = p.mode == PlanMode::strict ? "strict" : "toy";
    j["eta"] = round12(p.eta);
    j["precision_bits"] = p.precision_bits;
    Json stages = Json::array();
    for (const auto& st : p.stages) stages.push_back(assouad_stage_to_json(st));
    j["stages"] = stages;
    j["certificate"] = certificate_to_json(p.certificate);
    return j;
}

AssouadPlan assouad_plan_from_json(const Json& j) {
    AssouadPlan p;
    p.modulus = modulus_from_json(j.at("modulus"));
    p.epsilon = unrat(j, "epsilon");
    p.mode = j.value("mode", "strict") == "toy" ? PlanMode::toy : PlanMode::strict;
    p.eta = j.value("eta", 0.0);
    p.precision_bits = j.value("precision_bits", (long)(1 << 20));
    for (const auto& js : j.at("stages")) {
        AssouadStage st;
        st.k = js.at("k").get<int>();
        st.epsilon = unrat(js, "epsilon");
        st.scale_log2 = js.value("scale_log2", 0L);
        st.tooth_width = unrat(js, "tooth_width");
        st.height = unrat(js, "height");
        st.y0 = unrat(js, "y0");
        st.y_mid = unrat(js, "y_mid");
        st.y1 = unrat(js, "y1");
        st.center = unrat(js, "center");
        p.stages.push_back(std::move(st));
    }
    p.certificate = replay_assouad_certificate(p);
    return p;
}

Json count_record_to_json(const CountRecord& r) {
    Json j;
    if (r.window.whole) {
        j["window"] = "whole";
    } else {
        Json w;
        w["x"] = rat(r.window.x);
        w["y"] = rat(r.window.y);
        w["side"] = rat(r.window.half * 2);
        j["window"] = w;
    }
    j["r"] = rat(r.r);
    j["count"] = r.count.get_str();
    j["method"] = r.method == CountMethod::analytic ? "analytic" : "brute";
    j["anchor"] = r.anchor == MeshAnchor::origin ? "origin" : "window";
    return j;
}

Json estimate_to_json(const DimensionEstimate& e) {
    Json j;
    switch (e.kind) {
        case DimKind::box: j["kind"] = "box"; break;
        case DimKind::spectrum: j["kind"] = "spectrum"; break;
        case DimKind::quasi: j["kind"] = "quasi"; break;
        case DimKind::assouad: j["kind"] = "assouad"; break;
    }
    if (e.kind == DimKind::spectrum || e.kind == DimKind::quasi)
        j["theta"] = round12(e.theta);
    j["exponent"] = round12(e.exponent);
    j["clamped"] = e.clamped;
    j["residual"] = round12(e.residual);
    j["scale_range_log2"] = Json::array({round12(e.scale_hi_log2), round12(e.scale_lo_log2)});
    if (e.reference) j["reference"] = round12(*e.reference);
    if (e.top_decile_slope) j["top_decile_slope"] = round12(*e.top_decile_slope);
    if (e.bound) {
        Json jb;
        jb["bound"] = round12(e.bound->bound);
        jb["naive_bound"] = round12(e.bound->naive_bound);
        jb["tolerance"] = round12(e.bound->tolerance);
        jb["pass"] = e.bound->pass;
        j["bound_check"] = jb;
    }
    Json recs = Json::array();
    for (const auto& r : e.records) recs.push_back(count_record_to_json(r));
    j["records"] = recs;
    return j;
}

Json seminorm_to_json(const SeminormEstimate& e) {
    Json j;
    j["value"] = round12(e.value);
    j["witness"] = Json::array({rat(e.witness_x), rat(e.witness_y)});
    j["method"] = e.method == PairMethod::breakpoint_pairs ? "breakpoint_pairs" : "grid";
    j["is_lower_bound"] = e.is_lower_bound;
    if (e.downgraded) j["downgraded"] = true;
    j["pair_count"] = e.pair_count;
    if (e.skipped_pairs > 0) j["skipped_pairs"] = e.skipped_pairs;
    j["seed"] = e.seed;
    return j;
}

std::string counts_csv(const std::vector<CountRecord>& records, const std::string& kind,
                       double theta) {
    std::ostringstream out;
    out << "kind,theta,r,R,count,method,anchor\n";
    char theta_buf[32];
    std::snprintf(theta_buf, sizeof(theta_buf), "%.12g", theta);
    for (const auto& r : records) {
        out << kind << ',' << theta_buf << ',' << rat(r.r) << ','
            << (r.window.whole ? std::string("1") : rat(r.window.half * 2)) << ','
            << r.count.get_str() << ','
            << (r.method == CountMethod::analytic ? "analytic" : "brute") << ','
            << (r.anchor == MeshAnchor::origin ? "origin" : "window") << '\n';
    }
    return out.str();
}

std::string profile_csv(const std::vector<std::pair<double, double>>& profile) {
    std::ostringstream out;
    out << "t,lambda\n";
    char buf[80];
    for (const auto& [t, l] : profile) {
        std::snprintf(buf, sizeof(buf), "%.12g,%.12g\n", t, l);
        out << buf;
    }
    return out.str();
}

Json ExperimentConfig::to_json() const {
    Json j;
    j["modulus"] = modulus;
    if (theta) j["theta"] = *theta;
    if (delta) j["delta"] = *delta;
    if (epsilon) j["epsilon"] = *epsilon;
    if (stages) j["stages"] = *stages;
    if (mode) j["mode"] = *mode;
    if (precision_bits) j["precision_bits"] = *precision_bits;
    if (parallel) j["parallel"] = *parallel;
    if (seed) j["seed"] = *seed;
    if (r_schedule) j["r_schedule"] = *r_schedule;
    if (theta_grid) j["theta_grid"] = *theta_grid;
    if (out_prefix) j["out_prefix"] = *out_prefix;
    return j;
}

ExperimentConfig ExperimentConfig::from_json(const Json& j) {
    ExperimentConfig c;
    c.modulus = j.value("modulus", "");
    if (j.contains("theta")) c.theta = j["theta"].get<std::string>();
    if (j.contains("delta")) c.delta = j["delta"].get<std::string>();
    if (j.contains("epsilon")) c.epsilon = j["epsilon"].get<std::string>();
    if (j.contains("stages")) c.stages = j["stages"].get<int>();
    if (j.contains("mode")) c.mode = j["mode"].get<std::string>();
    if (j.contains("precision_bits")) c.precision_bits = j["precision_bits"].get<long>();
    if (j.contains("parallel")) c.parallel = j["parallel"].get<int>();
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("r_schedule"))
        c.r_schedule = j["r_schedule"].get<std::vector<std::string>>();
    if (j.contains("theta_grid"))
        c.theta_grid = j["theta_grid"].get<std::vector<std::string>>();
    if (j.contains("out_prefix")) c.out_prefix = j["out_prefix"].get<std::string>();
    return c;
}

bool validate_against_schema(const Json& doc, const Json& schema, std::string* error) {
    auto fail = [&](const std::string& msg) {
        if (error) *error = msg;
        return false;
    };
    if (schema.contains("type")) {
        std::string t = schema["type"].get<std::string>();
        bool ok = (t == "object" && doc.is_object()) || (t == "array" && doc.is_array()) ||
                  (t == "string" && doc.is_string()) || (t == "number" && doc.is_number()) ||
                  (t == "integer" && doc.is_number_integer()) ||
                  (t == "boolean" && doc.is_boolean());
        if (!ok) return fail("type mismatch: expected " + t);
    }
    if (schema.contains("required")) {
        for (const auto& k : schema["required"]) {
            if (!doc.contains(k.get<std::string>()))
                return fail("missing required key: " + k.get<std::string>());
        }
    }
    if (schema.contains("properties") && doc.is_object()) {
        for (auto it = schema["properties"].begin(); it != schema["properties"].end(); ++it) {
            if (doc.contains(it.key())) {
                if (!validate_against_schema(doc[it.key()], it.value(), error)) return false;
            }
        }
    }
    if (schema.contains("items") && doc.is_array()) {
        for (const auto& el : doc)
            if (!validate_against_schema(el, schema["items"], error)) return false;
    }
    return true;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot write file: " + path);
    out << content;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot read file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Json read_json_file(const std::string& path) {
    return Json::parse(read_text_file(path));
}

void write_json_file(const std::string& path, const Json& j) {
    write_text_file(path, j.dump(2) + "\n");
}

}  // namespace omegadim
