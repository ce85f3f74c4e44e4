#include "io.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <regex>
#include <set>
#include <sstream>

namespace bk::io {

namespace {

// An object with a fixed key set; unknown or missing keys are schema errors.
class Obj {
public:
    Obj(const json& j, std::string path, std::initializer_list<const char*> required,
        std::initializer_list<const char*> optional = {})
        : j_(j), path_(std::move(path)) {
        if (!j.is_object()) throw SchemaError(path_, "expected an object");
        std::set<std::string> known;
        for (auto* k : required) {
            known.insert(k);
            if (!j.contains(k)) throw SchemaError(path_, std::string("missing key \"") + k + "\"");
        }
        for (auto* k : optional) known.insert(k);
        for (auto& [k, v] : j.items())
            if (!known.count(k)) throw SchemaError(path_, "unknown key \"" + k + "\"");
    }
    const json& operator[](const std::string& k) const { return j_.at(k); }
    const json* get(const std::string& k) const { return j_.contains(k) ? &j_.at(k) : nullptr; }
    std::string at(const std::string& k) const { return path_ + "/" + k; }

private:
    const json& j_;
    std::string path_;
};

std::size_t read_size(const json& j, const std::string& path) {
    if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0))
        throw SchemaError(path, "expected a non-negative integer");
    return j.get<std::size_t>();
}

std::string read_string(const json& j, const std::string& path) {
    if (!j.is_string()) throw SchemaError(path, "expected a string");
    return j.get<std::string>();
}

bool read_bool(const json& j, const std::string& path) {
    if (!j.is_boolean()) throw SchemaError(path, "expected a boolean");
    return j.get<bool>();
}

const json& read_array(const json& j, const std::string& path, std::optional<std::size_t> len = {}) {
    if (!j.is_array()) throw SchemaError(path, "expected an array");
    if (len && j.size() != *len)
        throw SchemaError(path, "expected " + std::to_string(*len) + " entries, got " + std::to_string(j.size()));
    return j;
}

std::vector<std::string> read_strings(const json& j, const std::string& path) {
    std::vector<std::string> out;
    const auto& a = read_array(j, path);
    for (std::size_t i = 0; i < a.size(); ++i) out.push_back(read_string(a[i], path + "/" + std::to_string(i)));
    return out;
}

std::vector<IntVec> read_vecs(const json& j, const std::string& path, std::optional<std::size_t> len = {}) {
    std::vector<IntVec> out;
    const auto& a = read_array(j, path);
    for (std::size_t i = 0; i < a.size(); ++i) out.push_back(read_vec(a[i], path + "/" + std::to_string(i), len));
    return out;
}

json write_vecs(const std::vector<IntVec>& vs) {
    json a = json::array();
    for (auto& v : vs) a.push_back(write_vec(v));
    return a;
}

std::string face_map_key(const std::string& a, const std::string& b) { return a + "<" + b; }

void require_ambient(const ToricMonoid& s, std::size_t n, const std::string& path) {
    if (s.ambient_dim() != n)
        throw SchemaError(path, "ambient dimension " + std::to_string(s.ambient_dim()) + ", expected " +
                                    std::to_string(n));
}

}  // namespace

namespace {

bool flat(const json& j) {
    return std::all_of(j.begin(), j.end(), [](const json& x) { return x.is_primitive(); });
}

// Two-space indentation, except that arrays of scalars stay on one line.
void print(std::ostream& o, const json& j, int depth) {
    const std::string pad(2 * (depth + 1), ' '), end(2 * depth, ' ');
    if (j.is_array() && (j.empty() || flat(j))) {
        o << j.dump();
    } else if (j.is_array()) {
        o << "[\n";
        for (std::size_t i = 0; i < j.size(); ++i) {
            o << pad;
            print(o, j[i], depth + 1);
            o << (i + 1 < j.size() ? ",\n" : "\n");
        }
        o << end << "]";
    } else if (j.is_object() && !j.empty()) {
        o << "{\n";
        std::size_t i = 0;
        for (auto& [k, v] : j.items()) {
            o << pad << json(k).dump() << ": ";
            print(o, v, depth + 1);
            o << (++i < j.size() ? ",\n" : "\n");
        }
        o << end << "}";
    } else {
        o << j.dump();
    }
}

}  // namespace

std::string dump(const json& doc) {
    std::ostringstream o;
    print(o, doc, 0);
    o << "\n";
    return o.str();
}

json parse_text(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw SchemaError("", std::string("invalid JSON: ") + e.what());
    }
}

json load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("", "cannot read " + path);
    std::stringstream s;
    s << in.rdbuf();
    return parse_text(s.str());
}

json document(const std::string& type, json body) {
    if (!body.is_object()) body = json::object();
    body["type"] = type;
    body["version"] = kVersion;
    return body;
}

std::string type_of(const json& doc) {
    if (!doc.is_object() || !doc.contains("type")) throw SchemaError("", "not a typed document");
    if (!doc.contains("version")) throw SchemaError("", "missing key \"version\"");
    if (read_size(doc["version"], "/version") != kVersion)
        throw SchemaError("/version", "unsupported version");
    return read_string(doc["type"], "/type");
}

json open(const json& doc, const std::string& expected_type) {
    auto t = type_of(doc);
    if (t != expected_type) throw SchemaError("/type", "expected a " + expected_type + " document, got " + t);
    json body = doc;
    body.erase("type");
    body.erase("version");
    return body;
}

json write_int(const Int& x) { return x.get_str(); }

Int read_int(const json& j, const std::string& path) {
    if (j.is_number_integer()) return Int(std::to_string(j.get<long long>()));
    if (j.is_number_unsigned()) return Int(std::to_string(j.get<unsigned long long>()));
    static const std::regex re("-?[0-9]+");
    if (!j.is_string() || !std::regex_match(j.get<std::string>(), re))
        throw SchemaError(path, "expected an integer as a decimal string");
    return Int(j.get<std::string>());
}

json write_rat(const Rat& x) { return x.get_str(); }

Rat read_rat(const json& j, const std::string& path) {
    if (j.is_number_integer() || j.is_number_unsigned()) return Rat(read_int(j, path));
    static const std::regex re("(-?[0-9]+)(/([0-9]+))?");
    std::smatch m;
    std::string s = j.is_string() ? j.get<std::string>() : "";
    if (!j.is_string() || !std::regex_match(s, m, re)) throw SchemaError(path, "expected a rational \"p/q\"");
    Int den = m[3].matched ? Int(m[3].str()) : Int(1);
    if (den == 0) throw SchemaError(path, "zero denominator");
    Rat q(Int(m[1].str()), den);
    q.canonicalize();
    return q;
}

json write_vec(const IntVec& v) {
    json a = json::array();
    for (auto& x : v) a.push_back(write_int(x));
    return a;
}

IntVec read_vec(const json& j, const std::string& path, std::optional<std::size_t> len) {
    const auto& a = read_array(j, path, len);
    IntVec v;
    for (std::size_t i = 0; i < a.size(); ++i) v.push_back(read_int(a[i], path + "/" + std::to_string(i)));
    return v;
}

json write_rat_vec(const RatVec& v) {
    json a = json::array();
    for (auto& x : v) a.push_back(write_rat(x));
    return a;
}

RatVec read_rat_vec(const json& j, const std::string& path, std::optional<std::size_t> len) {
    const auto& a = read_array(j, path, len);
    RatVec v;
    for (std::size_t i = 0; i < a.size(); ++i) v.push_back(read_rat(a[i], path + "/" + std::to_string(i)));
    return v;
}

json write_mat(const IntMat& m) { return write_vecs(m.rows()); }

IntMat read_mat(const json& j, const std::string& path, std::size_t rows, std::size_t cols) {
    return stack(read_vecs(read_array(j, path, rows), path, cols), cols);
}

json write_rat_mat(const RatMat& m) {
    json a = json::array();
    for (auto& r : m.rows()) a.push_back(write_rat_vec(r));
    return a;
}

RatMat read_rat_mat(const json& j, const std::string& path, std::size_t rows, std::size_t cols) {
    const auto& a = read_array(j, path, rows);
    RatMat m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        auto r = read_rat_vec(a[i], path + "/" + std::to_string(i), cols);
        for (std::size_t k = 0; k < cols; ++k) m(i, k) = r[k];
    }
    return m;
}

json write_monoid(const ToricMonoid& s) {
    return {{"ambient_dim", s.ambient_dim()},
            {"generators", write_vecs(s.extremals())},
            {"lattice", write_mat(s.lattice())}};
}

ToricMonoid read_monoid(const json& j, const std::string& path) {
    Obj o(j, path, {"ambient_dim", "generators"}, {"lattice"});
    auto n = read_size(o["ambient_dim"], o.at("ambient_dim"));
    auto gens = read_vecs(o["generators"], o.at("generators"), n);
    if (auto* l = o.get("lattice")) {
        auto lat = read_vecs(*l, o.at("lattice"), n);
        if (lat.empty() && gens.empty()) return ToricMonoid::trivial(n);
        return ToricMonoid::from_lattice_cone(n, lat, gens);
    }
    if (gens.empty()) return ToricMonoid::trivial(n);
    return ToricMonoid::from_generators(n, gens);
}

json write_monoid_refinement(const MonoidRefinement& R) {
    json m = json::array();
    for (auto& s : R.members) m.push_back(write_monoid(s));
    return {{"base", write_monoid(R.base)}, {"members", m}};
}

MonoidRefinement read_monoid_refinement(const json& j, const std::string& path) {
    Obj o(j, path, {"base", "members"});
    auto base = read_monoid(o["base"], o.at("base"));
    std::vector<ToricMonoid> members;
    const auto& a = read_array(o["members"], o.at("members"));
    for (std::size_t i = 0; i < a.size(); ++i) {
        auto p = o.at("members") + "/" + std::to_string(i);
        members.push_back(read_monoid(a[i], p));
        require_ambient(members.back(), base.ambient_dim(), p);
    }
    return MonoidRefinement(base, members);
}

json write_complex(const MonoidalComplex& Q) {
    json el = json::array(), rel = json::array(), maps = json::object();
    for (auto& e : Q.elements()) el.push_back({{"id", e.id}, {"monoid", write_monoid(e.monoid)}});
    for (auto& r : Q.relations()) {
        rel.push_back({r.lower, r.upper});
        maps[face_map_key(r.lower, r.upper)] = write_mat(r.map);
    }
    return {{"elements", el}, {"relations", rel}, {"face_maps", maps}};
}

MonoidalComplex read_complex(const json& j, const std::string& path) {
    Obj o(j, path, {"elements", "relations"}, {"face_maps"});
    std::vector<MonoidalComplex::Element> el;
    std::map<std::string, std::size_t> amb;
    const auto& ea = read_array(o["elements"], o.at("elements"));
    for (std::size_t i = 0; i < ea.size(); ++i) {
        auto p = o.at("elements") + "/" + std::to_string(i);
        Obj e(ea[i], p, {"id", "monoid"});
        auto id = read_string(e["id"], e.at("id"));
        if (amb.count(id)) throw SchemaError(e.at("id"), "duplicate element " + id);
        el.push_back({id, read_monoid(e["monoid"], e.at("monoid"))});
        amb[id] = el.back().monoid.ambient_dim();
    }
    json maps = o.get("face_maps") ? *o.get("face_maps") : json::object();
    if (!maps.is_object()) throw SchemaError(o.at("face_maps"), "expected an object");
    std::set<std::string> used;
    std::vector<MonoidalComplex::Relation> rels;
    const auto& ra = read_array(o["relations"], o.at("relations"));
    for (std::size_t i = 0; i < ra.size(); ++i) {
        auto p = o.at("relations") + "/" + std::to_string(i);
        auto pr = read_strings(read_array(ra[i], p, 2), p);
        for (auto& id : pr)
            if (!amb.count(id)) throw SchemaError(p, "unknown element " + id);
        auto key = face_map_key(pr[0], pr[1]);
        IntMat m;
        if (maps.contains(key)) {
            m = read_mat(maps[key], o.at("face_maps") + "/" + key, amb[pr[0]], amb[pr[1]]);
            used.insert(key);
        } else if (amb[pr[0]] == amb[pr[1]]) {
            m = IntMat::identity(amb[pr[0]]);
        } else {
            throw SchemaError(p, "relation between different ambient dimensions needs a face map");
        }
        rels.push_back({pr[0], pr[1], m});
    }
    for (auto& [k, v] : maps.items())
        if (!used.count(k)) throw SchemaError(o.at("face_maps"), "face map " + k + " has no relation");
    return MonoidalComplex(std::move(el), rels);
}

json write_morphism(const ComplexMorphism& f) {
    json map = json::object(), hom = json::object();
    for (std::size_t e = 0; e < f.source.size(); ++e) {
        map[f.source.id(e)] = f.target.id(f.map[e]);
        hom[f.source.id(e)] = write_mat(f.hom[e]);
    }
    return {{"source", write_complex(f.source)}, {"target", write_complex(f.target)}, {"map", map}, {"hom", hom}};
}

ComplexMorphism read_morphism(const json& j, const std::string& path) {
    Obj o(j, path, {"source", "target", "map", "hom"});
    ComplexMorphism f{read_complex(o["source"], o.at("source")), read_complex(o["target"], o.at("target")), {}, {}};
    const auto& map = o["map"];
    const auto& hom = o["hom"];
    if (!map.is_object()) throw SchemaError(o.at("map"), "expected an object");
    if (!hom.is_object()) throw SchemaError(o.at("hom"), "expected an object");
    if (map.size() != f.source.size() || hom.size() != f.source.size())
        throw SchemaError(path, "map and hom need one entry per source element");
    for (std::size_t e = 0; e < f.source.size(); ++e) {
        const auto& id = f.source.id(e);
        if (!map.contains(id)) throw SchemaError(o.at("map"), "no image for " + id);
        if (!hom.contains(id)) throw SchemaError(o.at("hom"), "no matrix for " + id);
        auto t = f.target.find(read_string(map[id], o.at("map") + "/" + id));
        if (!t) throw SchemaError(o.at("map") + "/" + id, "unknown target element");
        f.map.push_back(*t);
        f.hom.push_back(read_mat(hom[id], o.at("hom") + "/" + id, f.source.monoid(e).ambient_dim(),
                                 f.target.monoid(*t).ambient_dim()));
    }
    return f;
}

json write_manifold(const CornerComplex& X) {
    std::map<std::string, std::vector<std::string>> below;
    for (auto& [g, f] : X.order()) below[f].push_back(g);
    json faces = json::array();
    for (auto& F : X.faces()) {
        auto b = below[F.id];
        std::sort(b.begin(), b.end());
        faces.push_back({{"id", F.id}, {"codim", F.hyps.size()}, {"hyps", F.hyps}, {"below", b}});
    }
    return {{"hypersurfaces", X.hypersurfaces()}, {"faces", faces}};
}

CornerComplex read_manifold(const json& j, const std::string& path) {
    Obj o(j, path, {"hypersurfaces", "faces"});
    auto hyps = read_strings(o["hypersurfaces"], o.at("hypersurfaces"));
    std::vector<CornerComplex::FaceData> faces;
    std::vector<std::pair<std::string, std::string>> order;
    std::set<std::string> ids, seen;
    const auto& fa = read_array(o["faces"], o.at("faces"));
    for (std::size_t i = 0; i < fa.size(); ++i) {
        auto p = o.at("faces") + "/" + std::to_string(i);
        Obj f(fa[i], p, {"id", "hyps"}, {"codim", "below"});
        auto id = read_string(f["id"], f.at("id"));
        if (!ids.insert(id).second) throw SchemaError(f.at("id"), "duplicate face " + id);
        auto h = read_strings(f["hyps"], f.at("hyps"));
        std::set<std::string> hs(h.begin(), h.end());
        if (hs.size() != h.size()) throw SchemaError(f.at("hyps"), "repeated hypersurface");
        if (auto* c = f.get("codim"); c && read_size(*c, f.at("codim")) != h.size())
            throw SchemaError(f.at("codim"), "codim differs from the number of hypersurfaces");
        seen.insert(h.begin(), h.end());
        if (auto* b = f.get("below"))
            for (auto& g : read_strings(*b, f.at("below"))) order.emplace_back(g, id);
        faces.push_back({id, h});
    }
    for (auto& [g, f] : order)
        if (!ids.count(g)) throw SchemaError(o.at("faces"), "unknown face " + g + " below " + f);
    std::set<std::string> declared(hyps.begin(), hyps.end());
    if (declared.size() != hyps.size() || declared != seen)
        throw SchemaError(o.at("hypersurfaces"), "must list exactly the hypersurfaces used by the faces");
    return CornerComplex(std::move(faces), order);
}

json write_bmap(const BMap& f) {
    return {{"source", write_manifold(f.source)},
            {"target", write_manifold(f.target)},
            {"face_map", f.face_map},
            {"alpha", write_mat(f.alpha)}};
}

BMap read_bmap(const json& j, const std::string& path) {
    Obj o(j, path, {"source", "target", "face_map", "alpha"});
    BMap f;
    f.source = read_manifold(o["source"], o.at("source"));
    f.target = read_manifold(o["target"], o.at("target"));
    const auto& fm = o["face_map"];
    if (!fm.is_object()) throw SchemaError(o.at("face_map"), "expected an object");
    for (auto& [k, v] : fm.items()) f.face_map[k] = read_string(v, o.at("face_map") + "/" + k);
    f.alpha = read_mat(o["alpha"], o.at("alpha"), f.source.hypersurfaces().size(), f.target.hypersurfaces().size());
    return f;
}

json write_system(const BinomialSystem& B) {
    return {{"n", B.n}, {"m", B.m}, {"gamma", write_vecs(B.gamma)}, {"smooth", B.smooth}};
}

BinomialSystem read_system(const json& j, const std::string& path) {
    Obj o(j, path, {"n", "gamma"}, {"m", "smooth"});
    BinomialSystem B;
    B.n = read_size(o["n"], o.at("n"));
    B.m = o.get("m") ? read_size(o["m"], o.at("m")) : 0;
    B.gamma = read_vecs(o["gamma"], o.at("gamma"), B.n);
    B.smooth = o.get("smooth") ? read_size(o["smooth"], o.at("smooth")) : 0;
    return B;
}

json write_raw_system(const RawSystem& S) {
    json bs = json::array(), sm = json::array();
    for (auto& b : S.binomials)
        bs.push_back({{"alpha", write_vec(b.alpha)}, {"beta", write_vec(b.beta)}, {"tangential", write_rat_vec(b.tangential)}});
    for (auto& s : S.smooth) sm.push_back(write_rat_vec(s));
    return {{"n", S.n}, {"m", S.m}, {"binomials", bs}, {"smooth", sm}};
}

RawSystem read_raw_system(const json& j, const std::string& path) {
    Obj o(j, path, {"n", "binomials"}, {"m", "smooth"});
    RawSystem S;
    S.n = read_size(o["n"], o.at("n"));
    S.m = o.get("m") ? read_size(o["m"], o.at("m")) : 0;
    const auto& ba = read_array(o["binomials"], o.at("binomials"));
    for (std::size_t i = 0; i < ba.size(); ++i) {
        auto p = o.at("binomials") + "/" + std::to_string(i);
        Obj b(ba[i], p, {"alpha", "beta"}, {"tangential"});
        RawBinomial r{read_vec(b["alpha"], b.at("alpha"), S.n), read_vec(b["beta"], b.at("beta"), S.n), {}};
        if (auto* t = b.get("tangential")) {
            r.tangential = read_rat_vec(*t, b.at("tangential"));
            if (!r.tangential.empty() && r.tangential.size() != S.m)
                throw SchemaError(b.at("tangential"), "expected m entries");
        }
        S.binomials.push_back(r);
    }
    if (auto* s = o.get("smooth")) {
        const auto& sa = read_array(*s, o.at("smooth"));
        for (std::size_t i = 0; i < sa.size(); ++i)
            S.smooth.push_back(read_rat_vec(sa[i], o.at("smooth") + "/" + std::to_string(i), S.m));
    }
    return S;
}

json write_atlas(const ChartAtlas& A) {
    json charts = json::array(), trans = json::array();
    for (auto& c : A.charts) charts.push_back({{"sigma", write_monoid(c.sigma)}, {"nu", write_mat(c.nu)}});
    for (auto& t : A.transitions)
        trans.push_back({{"from", t.from},
                         {"to", t.to},
                         {"chi", write_rat_mat(t.chi)},
                         {"common", t.common},
                         {"separator", write_vec(t.separator)}});
    return {{"n", A.n}, {"tangential", A.tangential}, {"charts", charts}, {"transitions", trans}};
}

ChartAtlas read_atlas(const json& j, const std::string& path) {
    Obj o(j, path, {"n", "charts", "transitions"}, {"tangential"});
    ChartAtlas A;
    A.n = read_size(o["n"], o.at("n"));
    A.tangential = o.get("tangential") ? read_size(o["tangential"], o.at("tangential")) : 0;
    const auto& ca = read_array(o["charts"], o.at("charts"));
    for (std::size_t i = 0; i < ca.size(); ++i) {
        auto p = o.at("charts") + "/" + std::to_string(i);
        Obj c(ca[i], p, {"sigma", "nu"});
        auto s = read_monoid(c["sigma"], c.at("sigma"));
        require_ambient(s, A.n, c.at("sigma"));
        A.charts.push_back({s, read_mat(c["nu"], c.at("nu"), A.n, A.n)});
    }
    const auto& ta = read_array(o["transitions"], o.at("transitions"));
    for (std::size_t i = 0; i < ta.size(); ++i) {
        auto p = o.at("transitions") + "/" + std::to_string(i);
        Obj t(ta[i], p, {"from", "to", "chi"}, {"common", "separator"});
        Transition tr;
        tr.from = read_size(t["from"], t.at("from"));
        tr.to = read_size(t["to"], t.at("to"));
        if (tr.from >= A.charts.size() || tr.to >= A.charts.size()) throw SchemaError(p, "chart index out of range");
        tr.chi = read_rat_mat(t["chi"], t.at("chi"), A.n, A.n);
        if (auto* c = t.get("common")) {
            const auto& cc = read_array(*c, t.at("common"));
            for (std::size_t k = 0; k < cc.size(); ++k) tr.common.push_back(read_size(cc[k], t.at("common")));
        }
        if (auto* s = t.get("separator")) tr.separator = read_vec(*s, t.at("separator"), A.n);
        A.transitions.push_back(tr);
    }
    return A;
}

json write_report(const Report& r) {
    return {{"ok", r.ok}, {"violated", r.violated}, {"detail", r.detail}, {"witness", write_vec(r.witness)}};
}

json write_sample_report(const SampleReport& r) {
    return {{"ok", r.ok},
            {"samples", r.samples},
            {"max_error", r.max_error},
            {"worst", r.worst},
            {"failures", r.failures}};
}

json write_problem(const ProblemDoc& P) {
    json body = {{"f1", write_bmap(P.problem.f1)}, {"f2", write_bmap(P.problem.f2)}};
    json dims = json::object();
    if (P.problem.dim1) dims["X1"] = *P.problem.dim1;
    if (P.problem.dim2) dims["X2"] = *P.problem.dim2;
    if (P.problem.dimY) dims["Y"] = *P.problem.dimY;
    if (!dims.empty()) body["dims"] = dims;
    if (!P.multiplicities.empty()) body["multiplicities"] = P.multiplicities;
    return body;
}

ProblemDoc read_problem(const json& j, const std::string& path) {
    Obj o(j, path, {"f1", "f2"}, {"dims", "multiplicities"});
    ProblemDoc P;
    P.problem.f1 = read_bmap(o["f1"], o.at("f1"));
    P.problem.f2 = read_bmap(o["f2"], o.at("f2"));
    if (auto* d = o.get("dims")) {
        Obj dd(*d, o.at("dims"), {}, {"X1", "X2", "Y"});
        if (auto* x = dd.get("X1")) P.problem.dim1 = read_size(*x, dd.at("X1"));
        if (auto* x = dd.get("X2")) P.problem.dim2 = read_size(*x, dd.at("X2"));
        if (auto* x = dd.get("Y")) P.problem.dimY = read_size(*x, dd.at("Y"));
    }
    if (auto* m = o.get("multiplicities")) {
        if (!m->is_object()) throw SchemaError(o.at("multiplicities"), "expected an object");
        for (auto& [k, v] : m->items()) {
            auto c = read_size(v, o.at("multiplicities") + "/" + k);
            if (c == 0) throw SchemaError(o.at("multiplicities") + "/" + k, "multiplicity must be positive");
            P.multiplicities[k] = c;
        }
    }
    return P;
}

json write_lift_check(const LiftCheck& c) {
    json body = {{"m", c.delta.r}, {"n", c.delta.c}, {"delta", write_mat(c.delta)}, {"nu", write_mat(c.nu)},
                 {"mu", write_mat(c.mu)}};
    if (!c.a.empty()) body["a"] = c.a;
    return body;
}

LiftCheck read_lift_check(const json& j, const std::string& path) {
    Obj o(j, path, {"m", "n", "delta", "nu", "mu"}, {"a"});
    auto m = read_size(o["m"], o.at("m")), n = read_size(o["n"], o.at("n"));
    LiftCheck c{read_mat(o["delta"], o.at("delta"), m, n), read_mat(o["nu"], o.at("nu"), n, n),
                read_mat(o["mu"], o.at("mu"), m, n), {}};
    if (auto* a = o.get("a")) {
        const auto& aa = read_array(*a, o.at("a"), n);
        for (std::size_t i = 0; i < n; ++i) {
            if (!aa[i].is_number()) throw SchemaError(o.at("a") + "/" + std::to_string(i), "expected a number");
            c.a.push_back(aa[i].get<double>());
        }
    }
    return c;
}

json write_pair(const FacePair& p, std::size_t multiplicity) {
    json j = {{"F1", p.F1},
              {"F2", p.F2},
              {"G", p.G},
              {"monoid", write_monoid(p.monoid)},
              {"smooth", p.smooth},
              {"relevant", p.relevant},
              {"normal_rank", p.normal_rank},
              {"normal_surjective", p.normal_surjective},
              {"transversal", p.transversal},
              {"multiplicity", multiplicity}};
    if (p.model) j["model"] = write_system(*p.model);
    return j;
}

json write_blowup(const Blowup& B, const std::optional<ComplexRefinement>& R) {
    json j = {{"space", write_manifold(B.space)},
              {"blowdown", write_bmap(B.blowdown)},
              {"identification", write_morphism(B.identification)}};
    if (R) j["refinement"] = write_morphism(*R);
    return j;
}

namespace {

Report validate_atlas(const ChartAtlas& A) {
    for (std::size_t i = 0; i < A.charts.size(); ++i) {
        const auto& c = A.charts[i];
        auto rows = c.nu.rows();
        auto ext = c.sigma.extremals();
        if (std::set<IntVec>(rows.begin(), rows.end()) != std::set<IntVec>(ext.begin(), ext.end()) ||
            abs(determinant(c.nu)) != 1 || !c.sigma.is_smooth())
            return Report::fail("chart", "chart " + std::to_string(i) + " is not a unimodular basis of its monoid");
    }
    for (auto& t : A.transitions) {
        auto inv = inverse(to_rat(A.charts[t.to].nu));
        if (t.from == t.to || !inv || !(to_rat(A.charts[t.from].nu) * *inv == t.chi))
            return Report::fail("transition", "χ of " + std::to_string(t.from) + "->" + std::to_string(t.to) +
                                                  " is not ν_from ν_to⁻¹");
    }
    return Report::pass();
}

using Check = std::function<Report(const json&, const std::string&)>;

Report checked_morphism(const json& j, const std::string& p) { return validate_morphism(read_morphism(j, p)); }
Report checked_refinement(const json& j, const std::string& p) { return validate_refinement(read_morphism(j, p)); }
Report checked_manifold(const json& j, const std::string& p) { return validate_corners(read_manifold(j, p)); }
Report checked_bmap(const json& j, const std::string& p) { return validate_bmap(read_bmap(j, p)); }
Report checked_complex(const json& j, const std::string& p) { return validate_complex(read_complex(j, p)); }
Report checked_system(const json& j, const std::string& p) { return validate_system(read_system(j, p)); }
Report checked_monoid(const json& j, const std::string& p) {
    read_monoid(j, p);
    return Report::pass();
}
Report checked_report(const json& j, const std::string& p) {
    Obj o(j, p, {"ok", "violated", "detail", "witness"});
    read_bool(o["ok"], o.at("ok"));
    read_vec(o["witness"], o.at("witness"));
    return Report::pass();
}

// Typed parts of result documents: key → reader/validator.
const std::map<std::string, std::vector<std::pair<std::string, Check>>>& result_parts() {
    static const std::map<std::string, std::vector<std::pair<std::string, Check>>> t = {
        {"hilbert_basis", {{"monoid", checked_monoid}}},
        {"blowup", {{"space", checked_manifold}, {"blowdown", checked_bmap},
                    {"identification", checked_morphism}, {"refinement", checked_refinement}}},
        {"domain_blowup", {{"S", checked_refinement}, {"space", checked_manifold}, {"blowdown", checked_bmap},
                           {"lift", checked_bmap}}},
        {"variety_complex", {{"complex", checked_complex}, {"inclusion", checked_morphism}}},
        {"resolution", {{"RX", checked_refinement}, {"lifted_complex", checked_complex},
                        {"verification", checked_report}}},
        {"smooth_fiber_product", {{"complex", checked_complex}, {"proj1", checked_morphism},
                                  {"proj2", checked_morphism}, {"space", checked_manifold},
                                  {"h1", checked_bmap}, {"h2", checked_bmap}}},
        {"fiber_resolution", {{"complex", checked_complex}, {"R", checked_refinement}, {"space", checked_manifold},
                              {"h1", checked_bmap}, {"h2", checked_bmap}, {"verification", checked_report}}},
        {"factorization", {{"S", checked_refinement}, {"space", checked_manifold}, {"blowdown", checked_bmap},
                           {"g", checked_bmap}, {"verification", checked_report}}},
        {"fiber_report", {}},
        {"variety_faces", {}},
        {"sample_report", {}},
    };
    return t;
}

Report first_failure(const std::vector<std::pair<std::string, Report>>& parts) {
    for (auto& [k, r] : parts)
        if (!r.ok) return Report::fail(k + "." + r.violated, r.detail, r.witness);
    return Report::pass();
}

}  // namespace

Report check_document(const json& doc) {
    auto type = type_of(doc);
    try {
        if (type == "monoid") return checked_monoid(open(doc, type), "");
        if (type == "monoid_refinement") return validate(read_monoid_refinement(open(doc, type)));
        if (type == "complex") return checked_complex(open(doc, type), "");
        if (type == "morphism") return checked_morphism(open(doc, type), "");
        if (type == "refinement") return checked_refinement(open(doc, type), "");
        if (type == "manifold") return checked_manifold(open(doc, type), "");
        if (type == "bmap") return checked_bmap(open(doc, type), "");
        if (type == "binomial_system") return checked_system(open(doc, type), "");
        if (type == "raw_binomial_system") {
            normal_form(read_raw_system(open(doc, type)));
            return Report::pass();
        }
        if (type == "fiber_problem") return validate_problem(read_problem(open(doc, type)).problem);
        if (type == "atlas") return validate_atlas(read_atlas(open(doc, type)));
        if (type == "lift_check") {
            auto c = read_lift_check(open(doc, type));
            if (!(c.mu * c.nu == c.delta)) return Report::fail("exponents", "δ is not μν");
            if (!inverse(to_rat(c.nu))) return Report::fail("chart", "ν is singular");
            return Report::pass();
        }
        if (type == "report") return checked_report(open(doc, type), "");
        auto it = result_parts().find(type);
        if (it == result_parts().end()) throw SchemaError("/type", "unknown document type " + type);
        auto body = open(doc, type);
        std::vector<std::pair<std::string, Report>> parts;
        for (auto& [key, check] : it->second)
            if (body.contains(key)) parts.emplace_back(key, check(body[key], "/" + key));
        if (type == "hilbert_basis") {
            auto s = read_monoid(body.at("monoid"), "/monoid");
            auto hb = read_vecs(body.at("basis"), "/basis", s.ambient_dim());
            auto want = s.hilbert_basis();
            if (std::set<IntVec>(hb.begin(), hb.end()) != std::set<IntVec>(want.begin(), want.end()))
                parts.emplace_back("basis", Report::fail("hilbert", "basis differs from the monoid's"));
        }
        if (type == "fiber_report" || type == "variety_faces") {
            const auto& list = type == "fiber_report" ? body.at("pairs") : body.at("faces");
            for (std::size_t i = 0; i < list.size(); ++i) {
                auto p = "/" + std::string(type == "fiber_report" ? "pairs/" : "faces/") + std::to_string(i);
                parts.emplace_back(p, checked_monoid(list[i].at("monoid"), p + "/monoid"));
                if (list[i].contains("model")) parts.emplace_back(p, checked_system(list[i]["model"], p + "/model"));
            }
        }
        return first_failure(parts);
    } catch (const Error& e) {
        return Report::fail(e.kind, e.what());
    } catch (const json::exception& e) {
        throw SchemaError("", std::string("malformed ") + type + " document: " + e.what());
    }
}

}  // namespace bk::io
