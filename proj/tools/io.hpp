#pragma once
// JSON documents for the blowkit command line tool.
//
// Every top-level document carries "type" and "version". Integers are decimal
// strings, rationals "p/q"; matrices are arrays of rows whose shape comes from
// the surrounding object. nlohmann::json keeps object keys sorted, so dump()
// is canonical.
#include <blowkit/fiber.hpp>
#include <blowkit/verify.hpp>

#include <json.hpp>

#include <map>
#include <stdexcept>
#include <string>

namespace bk::io {

using json = nlohmann::json;

constexpr int kVersion = 1;

// Malformed input: wrong JSON shape, unknown keys, bad numbers. The CLI maps
// this to exit code 2; bk::Error raised while building objects maps to 1.
struct SchemaError : std::runtime_error {
    std::string path;
    SchemaError(std::string p, const std::string& msg)
        : std::runtime_error((p.empty() ? std::string("/") : p) + ": " + msg), path(std::move(p)) {}
};

std::string dump(const json& doc);
json parse_text(const std::string& text);  // SchemaError on a syntax error
json load_file(const std::string& path);

// {"type": type, "version": 1} merged with body.
json document(const std::string& type, json body);
// Checks the envelope and returns the body without it.
json open(const json& doc, const std::string& expected_type);
std::string type_of(const json& doc);

json write_int(const Int& x);
Int read_int(const json& j, const std::string& path);
json write_rat(const Rat& x);
Rat read_rat(const json& j, const std::string& path);
json write_vec(const IntVec& v);
IntVec read_vec(const json& j, const std::string& path, std::optional<std::size_t> len = {});
json write_rat_vec(const RatVec& v);
RatVec read_rat_vec(const json& j, const std::string& path, std::optional<std::size_t> len = {});
json write_mat(const IntMat& m);
IntMat read_mat(const json& j, const std::string& path, std::size_t rows, std::size_t cols);
json write_rat_mat(const RatMat& m);
RatMat read_rat_mat(const json& j, const std::string& path, std::size_t rows, std::size_t cols);

json write_monoid(const ToricMonoid& s);
ToricMonoid read_monoid(const json& j, const std::string& path = "");
json write_monoid_refinement(const MonoidRefinement& R);
MonoidRefinement read_monoid_refinement(const json& j, const std::string& path = "");
json write_complex(const MonoidalComplex& Q);
MonoidalComplex read_complex(const json& j, const std::string& path = "");
json write_morphism(const ComplexMorphism& f);
ComplexMorphism read_morphism(const json& j, const std::string& path = "");
json write_manifold(const CornerComplex& X);
CornerComplex read_manifold(const json& j, const std::string& path = "");
json write_bmap(const BMap& f);
BMap read_bmap(const json& j, const std::string& path = "");
json write_system(const BinomialSystem& B);
BinomialSystem read_system(const json& j, const std::string& path = "");
json write_raw_system(const RawSystem& S);
RawSystem read_raw_system(const json& j, const std::string& path = "");
json write_atlas(const ChartAtlas& A);
ChartAtlas read_atlas(const json& j, const std::string& path = "");
json write_report(const Report& r);
json write_sample_report(const SampleReport& r);

struct ProblemDoc {
    FiberProblem problem;
    // user-declared number of components over a pair "(F₁,F₂)"; default 1
    std::map<std::string, std::size_t> multiplicities;
};
json write_problem(const ProblemDoc& P);
ProblemDoc read_problem(const json& j, const std::string& path = "");

struct LiftCheck {
    IntMat delta, nu, mu;
    std::vector<double> a;
};
json write_lift_check(const LiftCheck& c);
LiftCheck read_lift_check(const json& j, const std::string& path = "");

json write_pair(const FacePair& p, std::size_t multiplicity);
json write_blowup(const Blowup& B, const std::optional<ComplexRefinement>& R);

// Reads a typed document (including result documents written by the tool)
// and runs the validator of its module. Throws SchemaError on malformed
// input; invariant failures come back as a failed report.
Report check_document(const json& doc);

}  // namespace bk::io
