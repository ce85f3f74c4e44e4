// blowkit: command line front end. Reads JSON documents, runs one operation
// and writes a result document plus a one-line summary.
//
// Exit codes: 0 success, 1 validation failure (including library errors on
// well-formed input), 2 malformed input or usage, 3 internal error.
#include "io.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace bk;
using bk::io::json;

namespace {

enum class Level { error, warn, info, debug };

Level log_level() {
    const char* v = std::getenv("BLOWKIT_LOG");
    std::string s = v ? v : "info";
    if (s == "error") return Level::error;
    if (s == "warn") return Level::warn;
    if (s == "debug") return Level::debug;
    return Level::info;
}

void debug(const std::string& msg) {
    if (log_level() >= Level::debug) std::cerr << "debug: " << msg << "\n";
}

struct Flags {
    std::string out;
    std::uint64_t seed = 1;
    double tolerance = 1e-9;
    std::string format = "json";
};

struct Result {
    json doc;
    std::string summary;
    bool ok = true;
};

io::json load(const std::string& path) { return io::load_file(path); }

template <class T, class Read>
T load_as(const std::string& path, const std::string& type, Read read) {
    return read(io::open(load(path), type), "");
}

ComplexRefinement load_refinement(const std::string& path) {
    return load_as<ComplexRefinement>(path, "refinement", io::read_morphism);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(cur);
    return out;
}

// "1,-2,3"
IntVec parse_vec(const std::string& s, const std::string& what) {
    IntVec v;
    for (auto& t : split(s, ',')) {
        try {
            v.push_back(io::read_int(json(t), what));
        } catch (const io::SchemaError&) {
            throw io::SchemaError(what, "expected comma-separated integers, got \"" + s + "\"");
        }
    }
    if (v.empty()) throw io::SchemaError(what, "empty vector");
    return v;
}

// "1,0;0,1"
std::vector<IntVec> parse_rows(const std::string& s, const std::string& what) {
    std::vector<IntVec> rows;
    for (auto& r : split(s, ';')) rows.push_back(parse_vec(r, what));
    return rows;
}

std::string list(const std::vector<std::string>& xs) {
    std::string s;
    for (auto& x : xs) s += (s.empty() ? "" : " ") + x;
    return s.empty() ? "none" : s;
}

std::size_t unique_top(const MonoidalComplex& Q) {
    auto top = Q.maximal();
    if (top.size() != 1) throw Error("AmbiguousElement", "complex has several maximal elements; pass --at");
    return top[0];
}

Result report_result(const Report& r, const std::string& what) {
    return {io::document("report", io::write_report(r)),
            r.ok ? what + ": pass" : what + ": FAIL " + r.violated + ": " + r.detail, r.ok};
}

// ---- commands ----

Result cmd_validate(const std::string& file) {
    auto doc = load(file);
    auto type = io::type_of(doc);
    return report_result(io::check_document(doc), type);
}

Result cmd_hilbert(const std::string& file) {
    auto s = load_as<ToricMonoid>(file, "monoid", io::read_monoid);
    auto hb = s.hilbert_basis();
    json basis = json::array();
    for (auto& v : hb) basis.push_back(io::write_vec(v));
    json body = {{"monoid", io::write_monoid(s)},
                 {"basis", basis},
                 {"dim", s.dim()},
                 {"smooth", s.is_smooth()},
                 {"simplicial", s.is_simplicial()}};
    return {io::document("hilbert_basis", body),
            "hilbert basis of " + std::to_string(hb.size()) + " elements, " + std::to_string(s.extremals().size()) +
                " extremal, " + (s.is_smooth() ? "smooth" : "not smooth")};
}

Result cmd_faces(const std::string& file) {
    auto s = load_as<ToricMonoid>(file, "monoid", io::read_monoid);
    auto Q = MonoidalComplex::faces_of(s);
    return {io::document("complex", io::write_complex(Q)), std::to_string(Q.size()) + " faces"};
}

struct SubdivideOpts {
    std::string star, planar, cut;
    bool smooth = false;
};

Result cmd_subdivide(const std::string& file, const SubdivideOpts& o) {
    auto s = load_as<ToricMonoid>(file, "monoid", io::read_monoid);
    int chosen = !o.star.empty() + !o.planar.empty() + !o.cut.empty() + o.smooth;
    if (chosen != 1) throw io::SchemaError("", "pass exactly one of --star, --planar, --cut, --smooth");
    MonoidRefinement R;
    if (!o.star.empty()) R = star_subdivide(s, parse_vec(o.star, "--star"));
    if (!o.planar.empty()) R = planar_refine(s, parse_rows(o.planar, "--planar"));
    if (!o.cut.empty()) R = hyperplane_refine(s, parse_rows(o.cut, "--cut"));
    if (o.smooth) R = smoothing(s);
    auto v = validate(R);
    return {io::document("monoid_refinement", io::write_monoid_refinement(R)),
            std::to_string(R.maximal().size()) + " maximal members, " + (R.is_smooth() ? "smooth" : "not smooth") +
                (v.ok ? "" : ", INVALID " + v.violated),
            v.ok};
}

Result cmd_ns(const std::string& file) {
    auto Q = load_as<MonoidalComplex>(file, "complex", io::read_complex);
    std::vector<NsStep> trace;
    auto R = natural_smooth_refinement(Q, &trace, [](const NsStep& s) {
        debug("ns k=" + std::to_string(s.k) + " at " + s.element + ": M_k " + std::to_string(s.mk_before) + " -> " +
              std::to_string(s.mk_after));
    });
    return {io::document("refinement", io::write_morphism(R)),
            "ns: " + std::to_string(R.source.size()) + " elements after " + std::to_string(trace.size()) + " steps"};
}

Result cmd_extend(const std::string& file, const std::string& partial, bool smooth) {
    auto Q = load_as<MonoidalComplex>(file, "complex", io::read_complex);
    auto r0 = load_refinement(partial);
    std::vector<ExtendRound> rounds;
    auto R = extend_refinement(Q, r0, smooth, &rounds);
    for (auto& r : rounds)
        debug("extend d=" + std::to_string(r.d) + ": " + std::to_string(r.damaged) + " damaged");
    return {io::document("refinement", io::write_morphism(R)),
            "extension with " + std::to_string(R.source.size()) + " elements in " + std::to_string(rounds.size()) +
                " rounds"};
}

struct BlowupOpts {
    std::string ordinary, weights, refinement;
    std::vector<std::string> iterated;
};

Result cmd_blowup(const std::string& file, const BlowupOpts& o) {
    auto X = load_as<CornerComplex>(file, "manifold", io::read_manifold);
    int chosen = !o.ordinary.empty() + !o.iterated.empty() + !o.refinement.empty();
    if (chosen != 1) throw io::SchemaError("", "pass exactly one of --ordinary, --iterated, --refinement");
    if (!o.weights.empty() && o.ordinary.empty()) throw io::SchemaError("", "--weights needs --ordinary");
    std::optional<ComplexRefinement> R;
    Blowup B;
    if (!o.ordinary.empty() && o.weights.empty()) {
        auto c = ordinary_blowup(X, o.ordinary);
        R = c.refinement;
        B = c.blowup;
    } else if (!o.ordinary.empty()) {
        std::map<std::string, long> w;
        for (auto& kv : split(o.weights, ',')) {
            auto eq = kv.find('=');
            if (eq == std::string::npos) throw io::SchemaError("--weights", "expected H=k pairs");
            try {
                w[kv.substr(0, eq)] = std::stol(kv.substr(eq + 1));
            } catch (const std::exception&) {
                throw io::SchemaError("--weights", "bad weight in " + kv);
            }
        }
        auto c = inhomogeneous_blowup(X, o.ordinary, w);
        R = c.refinement;
        B = c.blowup;
    } else if (!o.iterated.empty()) {
        auto c = iterated_blowup(X, o.iterated);
        R = c.refinement;
        B = c.blowup;
    } else {
        R = load_refinement(o.refinement);
        B = generalized_blowup(X, *R);
    }
    return {io::document("blowup", io::write_blowup(B, R)),
            "blow-up with " + std::to_string(B.space.faces().size()) + " faces and " +
                std::to_string(B.space.hypersurfaces().size()) + " hypersurfaces"};
}

Result cmd_atlas(const std::string& file, const std::string& at, std::size_t tangential) {
    auto doc = load(file);
    MonoidRefinement R;
    if (io::type_of(doc) == "monoid_refinement") {
        R = io::read_monoid_refinement(io::open(doc, "monoid_refinement"));
    } else {
        auto F = io::read_morphism(io::open(doc, "refinement"));
        R = localize_refinement(F, at.empty() ? unique_top(F.target) : F.target.at(at));
    }
    auto A = local_atlas(R.base.ambient_dim(), R, tangential);
    return {io::document("atlas", io::write_atlas(A)),
            std::to_string(A.charts.size()) + " charts, " + std::to_string(A.transitions.size()) + " transitions"};
}

Result cmd_lift(const std::string& file, const std::string& refinement) {
    auto f = load_as<BMap>(file, "bmap", io::read_bmap);
    auto R = load_refinement(refinement);
    auto g = lift_bmap(f, R);
    return {io::document("bmap", io::write_bmap(g)),
            "lift to a space with " + std::to_string(g.target.faces().size()) + " faces"};
}

Result cmd_blowup_domain(const std::string& file, const std::string& refinement) {
    auto f = load_as<BMap>(file, "bmap", io::read_bmap);
    auto D = blowup_domain(f, load_refinement(refinement));
    json body = {{"S", io::write_morphism(D.S)},
                 {"space", io::write_manifold(D.domain.space)},
                 {"blowdown", io::write_bmap(D.domain.blowdown)},
                 {"lift", io::write_bmap(D.lift)},
                 {"minimal", D.minimal}};
    return {io::document("domain_blowup", body),
            "domain blown up to " + std::to_string(D.domain.space.faces().size()) + " faces" +
                (D.minimal ? " (pull-back already smooth)" : "")};
}

Result cmd_normal_form(const std::string& file) {
    auto S = load_as<RawSystem>(file, "raw_binomial_system", io::read_raw_system);
    auto B = normal_form(S);
    return {io::document("binomial_system", io::write_system(B)),
            std::to_string(B.gamma.size()) + " binomial and " + std::to_string(B.smooth) +
                " smooth equations, dimension " + std::to_string(B.dim())};
}

Result cmd_variety_faces(const std::string& file) {
    auto B = load_as<BinomialSystem>(file, "binomial_system", io::read_system);
    auto V = boundary_faces(B);
    json W = json::array(), faces = json::array();
    for (auto& w : V.W) W.push_back(io::write_vec(w));
    for (auto& F : V.faces)
        faces.push_back({{"id", F.id},
                         {"coords", F.coords},
                         {"witness", io::write_vec(F.witness)},
                         {"monoid", io::write_monoid(F.monoid)},
                         {"codim", F.codim},
                         {"codim_in_face", F.codim_in_face},
                         {"tangent_dim", F.tangent_dim}});
    return {io::document("variety_faces", {{"n", V.n}, {"W", W}, {"faces", faces}}),
            std::to_string(V.faces.size()) + " boundary faces met"};
}

Result cmd_variety_complex(const std::string& file) {
    auto B = load_as<BinomialSystem>(file, "binomial_system", io::read_system);
    auto V = variety_complex(B);
    bool smooth = is_smooth_complex(V.complex);
    return {io::document("variety_complex",
                         {{"complex", io::write_complex(V.complex)},
                          {"inclusion", io::write_morphism(V.inclusion)},
                          {"smooth", smooth}}),
            "P_D with " + std::to_string(V.complex.size()) + " elements, " + (smooth ? "smooth" : "not smooth")};
}

Result cmd_resolve(const std::string& file, const std::string& refinement) {
    auto B = load_as<BinomialSystem>(file, "binomial_system", io::read_system);
    auto res = refinement.empty() ? universal_resolution(B) : resolve(B, load_refinement(refinement));
    json body = {{"RX", io::write_morphism(res.RX)},
                 {"route", res.route},
                 {"lifted", res.lifted},
                 {"lifted_complex", io::write_complex(res.lifted_complex)},
                 {"lifted_from", res.lifted_from},
                 {"verification", io::write_report(res.verification)},
                 {"sign_uniform", res.sign_uniform},
                 {"universal", res.universal}};
    return {io::document("resolution", body),
            "resolved by the " + res.route + " route: R_X has " + std::to_string(res.RX.source.size()) +
                " elements, lift has " + std::to_string(res.lifted.size()) +
                (res.verification.ok ? "" : "; verification FAILED " + res.verification.violated),
            res.verification.ok};
}

io::ProblemDoc load_problem(const std::string& file) {
    return load_as<io::ProblemDoc>(file, "fiber_problem", io::read_problem);
}

std::size_t multiplicity(const io::ProblemDoc& P, const FacePair& p) {
    auto it = P.multiplicities.find("(" + p.F1 + "," + p.F2 + ")");
    return it == P.multiplicities.end() ? 1 : it->second;
}

Result cmd_fiber_analyze(const std::string& file) {
    auto P = load_problem(file);
    auto rep = analyze(P.problem);
    json pairs = json::array();
    for (auto& p : rep.pairs) pairs.push_back(io::write_pair(p, multiplicity(P, p)));
    json body = {{"pairs", pairs},
                 {"transversal", rep.transversal},
                 {"smooth", rep.smooth},
                 {"offenders", rep.offenders},
                 {"note", rep.note + "; multiplicities are as declared by the user, 1 by default"}};
    std::size_t relevant = 0;
    for (auto& p : rep.pairs) relevant += p.relevant;
    return {io::document("fiber_report", body),
            std::to_string(relevant) + " of " + std::to_string(rep.pairs.size()) + " face pairs relevant, " +
                (rep.transversal ? "dimension count holds" : "dimension count FAILS") + ", non-smooth: " +
                list(rep.offenders)};
}

Result cmd_fiber_check(const std::string& file) {
    auto P = load_problem(file);
    auto tb = theorem_b_check(P.problem);
    json body = {{"smooth", tb.smooth},
                 {"offenders", tb.offenders},
                 {"complex", io::write_complex(tb.complex.complex)},
                 {"proj1", io::write_morphism(tb.complex.proj1)},
                 {"proj2", io::write_morphism(tb.complex.proj2)}};
    if (tb.space) {
        body["space"] = io::write_manifold(*tb.space);
        body["h1"] = io::write_bmap(*tb.h1);
        body["h2"] = io::write_bmap(*tb.h2);
    }
    return {io::document("smooth_fiber_product", body),
            tb.smooth ? "fiber product smooth" : "fiber product NOT smooth; offenders: " + list(tb.offenders),
            tb.smooth};
}

Result cmd_fiber_resolve(const std::string& file, const std::string& refinement) {
    auto P = load_problem(file);
    std::optional<ComplexRefinement> R;
    if (!refinement.empty()) R = load_refinement(refinement);
    auto FR = resolve_fiber_product(P.problem, R);
    json pairs = json::array();
    for (auto& p : FR.pairs) pairs.push_back(io::write_pair(p, multiplicity(P, p)));
    json body = {{"complex", io::write_complex(FR.complex.complex)},
                 {"R", io::write_morphism(FR.R)},
                 {"space", io::write_manifold(FR.space)},
                 {"h1", io::write_bmap(FR.h1)},
                 {"h2", io::write_bmap(FR.h2)},
                 {"pairs", pairs},
                 {"verification", io::write_report(FR.verification)}};
    return {io::document("fiber_resolution", body),
            "resolved fiber product with " + std::to_string(FR.space.faces().size()) + " faces" +
                (FR.verification.ok ? "" : "; verification FAILED " + FR.verification.violated),
            FR.verification.ok};
}

Result cmd_fiber_factor(const std::string& file, const std::string& g1, const std::string& g2,
                        const std::string& refinement) {
    auto P = load_problem(file);
    auto a = load_as<BMap>(g1, "bmap", io::read_bmap);
    auto b = load_as<BMap>(g2, "bmap", io::read_bmap);
    std::optional<ComplexRefinement> R;
    if (!refinement.empty()) R = load_refinement(refinement);
    auto FR = resolve_fiber_product(P.problem, R);
    auto F = factor_through(P.problem, FR, a, b);
    json body = {{"component", F.component},
                 {"blown_up", F.blown_up},
                 {"g", io::write_bmap(F.g)},
                 {"verification", io::write_report(F.verification)}};
    if (F.S) body["S"] = io::write_morphism(*F.S);
    if (F.domain) {
        body["space"] = io::write_manifold(F.domain->space);
        body["blowdown"] = io::write_bmap(F.domain->blowdown);
    }
    return {io::document("factorization", body),
            "factors through component " + F.component + (F.blown_up ? " after blowing up the domain" : "") +
                (F.verification.ok ? "" : "; verification FAILED " + F.verification.violated),
            F.verification.ok};
}

Result cmd_verify(const std::string& file, const Flags& fl, std::size_t points) {
    auto doc = load(file);
    SamplePlan plan;
    plan.points = points;
    plan.seed = fl.seed;
    plan.tolerance = fl.tolerance;
    SampleReport r;
    if (io::type_of(doc) == "lift_check") {
        auto c = io::read_lift_check(io::open(doc, "lift_check"));
        r = verify_lift(c.delta, c.nu, c.mu, plan, c.a);
    } else {
        r = verify_transitions(io::read_atlas(io::open(doc, "atlas")), plan);
    }
    std::ostringstream s;
    s << (r.ok ? "pass" : "FAIL") << ": " << r.samples << " samples, max relative error " << r.max_error;
    return {io::document("sample_report", io::write_sample_report(r)), s.str(), r.ok};
}

// Typed parts of result documents, by key.
const std::map<std::string, std::string>& part_types() {
    static const std::map<std::string, std::string> t = {
        {"refinement", "refinement"}, {"R", "refinement"},       {"S", "refinement"},     {"RX", "refinement"},
        {"identification", "morphism"}, {"inclusion", "morphism"}, {"proj1", "morphism"}, {"proj2", "morphism"},
        {"space", "manifold"},        {"blowdown", "bmap"},       {"lift", "bmap"},        {"g", "bmap"},
        {"h1", "bmap"},               {"h2", "bmap"},             {"complex", "complex"},  {"lifted_complex", "complex"},
        {"monoid", "monoid"},         {"verification", "report"}};
    return t;
}

Result cmd_extract(const std::string& file, const std::string& part) {
    auto doc = load(file);
    auto type = io::type_of(doc);
    auto it = part_types().find(part);
    if (it == part_types().end() || !doc.contains(part))
        throw io::SchemaError("/" + part, "a " + type + " document has no typed part " + part);
    auto out = io::document(it->second, doc[part]);
    auto r = io::check_document(out);
    return {out, it->second + " extracted from " + type + (r.ok ? "" : "; INVALID " + r.violated), r.ok};
}

void emit(const Result& r, const Flags& fl) {
    std::string text = io::dump(r.doc);
    if (!fl.out.empty()) {
        std::ofstream o(fl.out);
        if (!o) throw io::SchemaError("--out", "cannot write " + fl.out);
        o << text;
    } else if (fl.format == "json") {
        std::cout << text;
    }
    if (fl.format == "text")
        std::cout << r.summary << "\n";
    else if (log_level() >= Level::info)
        std::cerr << r.summary << "\n";
}

int fail(const Flags& fl, int code, const std::string& kind, std::string msg, const std::string& path = "") {
    if (msg.rfind(kind + ": ", 0) == 0) msg.erase(0, kind.size() + 2);
    if (fl.format == "text") {
        std::cerr << "blowkit: " << kind << ": " << msg << "\n";
    } else {
        json d = {{"type", "error"}, {"version", io::kVersion}, {"kind", kind}, {"message", msg}, {"exit", code}};
        if (!path.empty()) d["path"] = path;
        std::cerr << d.dump() << "\n";
    }
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"blowkit: toric monoids, monoidal complexes and generalized blow-ups"};
    app.require_subcommand(1);
    app.fallthrough();
    Flags fl;
    app.add_option("--out", fl.out, "Write the result document to this file");
    app.add_option("--seed", fl.seed, "Seed for sampling");
    app.add_option("--tolerance", fl.tolerance, "Relative tolerance for verify")->check(CLI::PositiveNumber);
    app.add_option("--format", fl.format, "json: document on stdout; text: summary on stdout")
        ->check(CLI::IsMember({"json", "text"}));

    std::string input, refinement, at, partial, g1, g2;
    std::size_t tangential = 0, points = 100;
    bool smooth = false;
    SubdivideOpts sub;
    BlowupOpts bl;
    std::function<Result()> run;

    auto cmd = [&](CLI::App* parent, const std::string& name, const std::string& help, std::function<Result()> f) {
        auto* c = parent->add_subcommand(name, help);
        c->fallthrough();
        c->add_option("input", input, "Input document")->required();
        c->callback([&run, f] { run = f; });
        return c;
    };

    cmd(&app, "validate", "Check any document against its invariants", [&] { return cmd_validate(input); });
    cmd(&app, "hilbert", "Hilbert basis of a monoid", [&] { return cmd_hilbert(input); });
    cmd(&app, "faces", "Face complex of a monoid", [&] { return cmd_faces(input); });
    auto* s = cmd(&app, "subdivide", "Refine a monoid", [&] { return cmd_subdivide(input, sub); });
    s->add_option("--star", sub.star, "Star subdivision at v, e.g. 1,1");
    s->add_option("--planar", sub.planar, "Planar refinement along span(M), rows separated by ;");
    s->add_option("--cut", sub.cut, "Cut by the hyperplanes h = 0, rows separated by ;");
    s->add_flag("--smooth", sub.smooth, "Smoothing of a simplicial monoid");
    cmd(&app, "ns", "Natural smooth refinement of a complex", [&] { return cmd_ns(input); });
    auto* e = cmd(&app, "extend", "Extend a refinement of a subcomplex",
                  [&] { return cmd_extend(input, partial, smooth); });
    e->add_option("--partial", partial, "Refinement of a subcomplex")->required();
    e->add_flag("--smooth", smooth, "Take ns of the extension");
    auto* b = cmd(&app, "blowup", "Blow up a manifold with corners", [&] { return cmd_blowup(input, bl); });
    b->add_option("--ordinary", bl.ordinary, "Blow up this face");
    b->add_option("--weights", bl.weights, "With --ordinary: hypersurface weights, e.g. H1=2,H2=1");
    b->add_option("--iterated", bl.iterated, "Blow up these faces in turn (repeat the option)");
    b->add_option("--refinement", bl.refinement, "Generalized blow-up along a refinement of P_X");
    auto* a = cmd(&app, "atlas", "Chart atlas of a smooth refinement", [&] { return cmd_atlas(input, at, tangential); });
    a->add_option("--at", at, "Element of the target to localize at");
    a->add_option("--tangential", tangential, "Number of tangential coordinates");
    auto* l = cmd(&app, "lift", "Lift a b-map through a generalized blow-up of its target",
                  [&] { return cmd_lift(input, refinement); });
    l->add_option("--refinement", refinement, "Refinement of P_Y")->required();
    auto* d = cmd(&app, "blowup-domain", "Blow up the domain so that a b-map lifts",
                  [&] { return cmd_blowup_domain(input, refinement); });
    d->add_option("--refinement", refinement, "Refinement of P_Y")->required();

    auto* bin = app.add_subcommand("binomial", "Interior binomial subvarieties");
    bin->require_subcommand(1);
    bin->fallthrough();
    cmd(bin, "normal-form", "Normal form of a raw system", [&] { return cmd_normal_form(input); });
    cmd(bin, "faces", "Boundary faces met by the variety", [&] { return cmd_variety_faces(input); });
    cmd(bin, "complex", "The complex P_D and its inclusion", [&] { return cmd_variety_complex(input); });
    auto* r = cmd(bin, "resolve", "Resolve the variety", [&] { return cmd_resolve(input, refinement); });
    r->add_option("--refinement", refinement, "Smooth refinement of P_D (default: universal)");

    auto* fib = app.add_subcommand("fiber", "Fiber products of b-maps");
    fib->require_subcommand(1);
    fib->fallthrough();
    cmd(fib, "analyze", "Face pairs and their monoids", [&] { return cmd_fiber_analyze(input); });
    cmd(fib, "check-smooth", "Is the fiber complex smooth", [&] { return cmd_fiber_check(input); });
    auto* fr = cmd(fib, "resolve", "Smooth resolution of the fiber product",
                   [&] { return cmd_fiber_resolve(input, refinement); });
    fr->add_option("--refinement", refinement, "Smooth refinement of the fiber complex (default: ns)");
    auto* ff = cmd(fib, "factor", "Factor a commuting pair through the resolution",
                   [&] { return cmd_fiber_factor(input, g1, g2, refinement); });
    ff->add_option("--g1", g1, "b-map into X1")->required();
    ff->add_option("--g2", g2, "b-map into X2")->required();
    ff->add_option("--refinement", refinement, "Smooth refinement of the fiber complex (default: ns)");

    std::string part;
    auto* x = cmd(&app, "extract", "Pull a typed part out of a result document", [&] { return cmd_extract(input, part); });
    x->add_option("part", part, "Key of the part, e.g. refinement")->required();

    auto* v = cmd(&app, "verify", "Sample an atlas or a lift numerically", [&] { return cmd_verify(input, fl, points); });
    v->add_option("--points", points, "Samples per overlap")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        if (err.get_exit_code() == 0) return app.exit(err);
        return fail(fl, 2, "UsageError", err.what());
    }

    try {
        auto res = run();
        emit(res, fl);
        return res.ok ? 0 : 1;
    } catch (const io::SchemaError& err) {
        return fail(fl, 2, "SchemaError", err.what(), err.path);
    } catch (const Error& err) {
        return fail(fl, 1, err.kind, err.what());
    } catch (const std::exception& err) {
        return fail(fl, 3, "InternalError", err.what());
    }
}
