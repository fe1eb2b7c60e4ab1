#include "ctrlgauge/io.hpp"
#include "ctrlgauge/error.hpp"
#include "ctrlgauge/zonotope.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace ctrlgauge::io {

using nlohmann::json;

namespace {

[[noreturn]] void schema(const std::string& what)
{
    throw Error(ErrorCode::SchemaViolation, what);
}

Vector vector_from(const json& j, const std::string& field)
{
    if (!j.is_array()) {
        schema("'" + field + "' must be an array of numbers");
    }
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number()) {
            schema("'" + field + "' must contain numbers only");
        }
        v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
    }
    return v;
}

Matrix matrix_from(const json& j, const std::string& field)
{
    if (!j.is_array() || j.empty()) {
        schema("'" + field + "' must be a non-empty array of rows");
    }
    const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
    Matrix m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
    for (std::size_t i = 0; i < j.size(); ++i) {
        const Vector row = vector_from(j[i], field);
        if (static_cast<std::size_t>(row.size()) != cols) {
            throw Error(ErrorCode::DimensionMismatch, "rows of '" + field + "' differ in length");
        }
        m.row(static_cast<Eigen::Index>(i)) = row;
    }
    return m;
}

json to_json(const Vector& v)
{
    json j = json::array();
    for (double x : v) {
        j.push_back(x);
    }
    return j;
}

json to_json(const Matrix& m)
{
    json j = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        j.push_back(to_json(Vector(m.row(i).transpose())));
    }
    return j;
}

json to_json(const std::optional<Vector>& v)
{
    return v ? to_json(*v) : json(nullptr);
}

json system_json(const LdtSystem& sys)
{
    return {{"name", sys.name()}, {"A", to_json(sys.A())}, {"B", to_json(sys.B())}};
}

json shape_json(const ShapeReport& s)
{
    json planar = json::array();
    for (const auto& [axes, value] : s.planarShapeFactors) {
        planar.push_back({{"axes", {axes.first + 1, axes.second + 1}}, {"value", value}});
    }
    return {{"volume", s.volume},
            {"rank", s.rank},
            {"sideLengths", to_json(s.sideLengths)},
            {"overallShapeFactor", s.overallShapeFactor},
            {"planarShapeFactors", planar}};
}

json sample_json(const TheoremSample& s)
{
    return {{"x0", to_json(s.x0)},
            {"minStepsFirst", s.minStepsFirst},
            {"minStepsSecond", s.minStepsSecond},
            {"dimFirst", s.dimFirst},
            {"dimSecond", s.dimSecond}};
}

std::string dump(const json& j)
{
    return j.dump(2) + "\n";
}

} // namespace

ModelFile parse_model(const std::string& text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        schema(std::string("model is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) {
        schema("model must be a JSON object");
    }
    for (const char* key : {"A", "B", "rated"}) {
        if (!j.contains(key)) {
            schema(std::string("model lacks '") + key + "'");
        }
    }
    const std::string name = j.contains("name") && j["name"].is_string() ? j["name"].get<std::string>() : "model";
    LdtSystem sys(name, matrix_from(j["A"], "A"), matrix_from(j["B"], "B"));
    const json& rated = j["rated"];
    if (!rated.is_object() || !rated.contains("u") || !rated.contains("x")) {
        schema("'rated' must hold 'u' and 'x'");
    }
    NormalizationSpec bounds{vector_from(rated["u"], "rated.u"), vector_from(rated["x"], "rated.x"), std::nullopt};
    if (bounds.inputRated.size() != sys.r() || bounds.stateRated.size() != sys.n()) {
        throw Error(ErrorCode::DimensionMismatch, "rated bounds must have r input and n state entries");
    }
    if (j.contains("target") && !j["target"].is_null()) {
        const json& target = j["target"];
        if (!target.is_object() || !target.contains("x")) {
            schema("'target' must hold 'x'");
        }
        bounds.stateTarget = vector_from(target["x"], "target.x");
        if (bounds.stateTarget->size() != sys.n()) {
            throw Error(ErrorCode::DimensionMismatch, "target bounds must have n entries");
        }
    }
    return ModelFile{std::move(sys), std::move(bounds)};
}

ModelFile load_model(const std::filesystem::path& path)
{
    return parse_model(read_file(path));
}

std::string model_json(const ModelFile& model)
{
    json j = system_json(model.system);
    j["rated"] = {{"u", to_json(model.bounds.inputRated)}, {"x", to_json(model.bounds.stateRated)}};
    if (model.bounds.stateTarget) {
        j["target"] = {{"x", to_json(*model.bounds.stateTarget)}};
    }
    return dump(j);
}

ModelFile normalize_model(const ModelFile& model, bool useTarget)
{
    LdtSystem sys = normalize_full(model.system, model.bounds, useTarget);
    const Vector scale = useTarget ? *model.bounds.stateTarget : model.bounds.stateRated;
    NormalizationSpec bounds;
    bounds.inputRated = Vector::Ones(sys.r());
    bounds.stateRated = model.bounds.stateRated.cwiseQuotient(scale);
    if (model.bounds.stateTarget) {
        bounds.stateTarget = model.bounds.stateTarget->cwiseQuotient(scale);
    }
    return ModelFile{sys.renamed(model.system.name() + (useTarget ? " (target)" : " (rated)")), bounds};
}

std::string region_summary_json(const RegionFamily& family)
{
    const Zonotope& last = family.stage(family.horizon);
    const ShapeReport shape = shape_report(last);
    json volumes = json::array();
    json counts = json::array();
    for (int k = 1; k <= family.horizon; ++k) {
        const Zonotope& z = family.stage(k);
        volumes.push_back(volume(z));
        counts.push_back(vertices(z).size());
    }
    json j = {{"system", family.system.name()},
              {"kind", std::string(to_string(family.kind))},
              {"N", family.horizon},
              {"rank", shape.rank},
              {"volume", shape.volume},
              {"volumeByStage", volumes},
              {"vertexCountByStage", counts},
              {"sideLengths", to_json(shape.sideLengths)},
              {"overallShapeFactor", shape.overallShapeFactor},
              {"planarShapeFactors", shape_json(shape)["planarShapeFactors"]}};
    return dump(j);
}

std::string control_solution_json(const LdtSystem& sys, const ControlSolution& sol)
{
    json inputs = json::array();
    for (const Vector& u : sol.inputs) {
        inputs.push_back(to_json(u));
    }
    json j = {{"system", system_json(sys)},
              {"kind", std::string(to_string(sol.kind))},
              {"x0", to_json(sol.x0)},
              {"minSteps", sol.minSteps},
              {"inputs", inputs},
              {"boundaryStatus", std::string(to_string(sol.boundaryStatus))},
              {"margin", sol.margin},
              {"strategyDim", sol.strategyDim},
              {"horizon", sol.horizon},
              {"minimalityCertificate", to_json(sol.minimalityCertificate)}};
    return dump(j);
}

std::string not_reachable_json(const LdtSystem& sys, const Vector& x0, RegionKind kind,
                               const NotReachableError& err)
{
    json j = {{"system", system_json(sys)},
              {"kind", std::string(to_string(kind))},
              {"x0", to_json(x0)},
              {"reachable", false},
              {"horizon", err.horizon()},
              {"certificate", to_json(err.certificate())},
              {"violation", err.violation()}};
    return dump(j);
}

std::string comparison_json(const LdtSystem& first, const LdtSystem& second, RegionKind kind,
                            const AbilityVerdict& verdict)
{
    json stages = json::array();
    for (const StageContainment& s : verdict.stages) {
        stages.push_back({{"steps", s.steps},
                          {"exact", s.exact},
                          {"firstInSecond", s.firstInSecond},
                          {"secondInFirst", s.secondInFirst},
                          {"marginFirstInSecond", s.marginFirstInSecond},
                          {"marginSecondInFirst", s.marginSecondInFirst},
                          {"firstOutsideSecond", to_json(s.firstOutsideSecond)},
                          {"secondOutsideFirst", to_json(s.secondOutsideFirst)}});
    }
    json j = {{"first", system_json(first)},
              {"second", system_json(second)},
              {"kind", std::string(to_string(kind))},
              {"relation", std::string(to_string(verdict.relation))},
              {"stronger", std::string(to_string(verdict.stronger))},
              {"atHorizon", verdict.atHorizon},
              {"exact", verdict.exact},
              {"note", verdict.note},
              {"stages", stages},
              {"metricsFirst", shape_json(verdict.metricsFirst)},
              {"metricsSecond", shape_json(verdict.metricsSecond)}};
    return dump(j);
}

std::string theorem_report_json(const LdtSystem& first, const LdtSystem& second, const TheoremReport& report)
{
    json violations = json::array();
    auto record = [&](std::size_t idx, const char* conclusion) {
        violations.push_back({{"conclusion", conclusion},
                              {"first", system_json(first)},
                              {"second", system_json(second)},
                              {"horizon", report.horizon},
                              {"kind", std::string(to_string(report.kind))},
                              {"seed", report.seed},
                              {"sample", sample_json(report.samples[idx])}});
    };
    for (std::size_t idx : report.timeViolationIndices) {
        record(idx, "time");
    }
    for (std::size_t idx : report.dimViolationIndices) {
        record(idx, "strategyDim");
    }
    json j = {{"horizon", report.horizon},
              {"kind", std::string(to_string(report.kind))},
              {"seed", report.seed},
              {"states", report.states},
              {"time", {{"violations", report.timeViolations},
                        {"strictlyFaster", report.timeStrictlyFaster},
                        {"ties", report.timeTies}}},
              {"strategyDim", {{"violations", report.dimViolations},
                               {"less", report.dimLess},
                               {"equal", report.dimEqual}}},
              {"violations", violations}};
    return dump(j);
}

std::string verification_json(const oracle::VerificationReport& report)
{
    json checks = json::array();
    for (const oracle::CheckResult& c : report.checks) {
        checks.push_back({{"name", c.name},
                          {"status", c.passed ? "pass" : "fail"},
                          {"discrepancy", c.discrepancy},
                          {"cases", c.cases},
                          {"detail", c.detail},
                          {"seed", report.seed}});
    }
    json j = {{"seed", report.seed},
              {"level", report.level == oracle::Level::Full ? "full" : "quick"},
              {"passed", report.passed()},
              {"checks", checks}};
    return dump(j);
}

Vector parse_vector(const std::string& text)
{
    std::vector<double> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || item.find_first_not_of(" \t", used) != std::string::npos) {
            throw Error(ErrorCode::InvalidArgument, "cannot parse '" + item + "' as a number");
        }
        values.push_back(v);
    }
    if (values.empty()) {
        throw Error(ErrorCode::InvalidArgument, "empty vector");
    }
    return Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::InvalidArgument, "cannot open " + path.string());
    }
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_atomic(const std::filesystem::path& path, const std::string& content)
{
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw Error(ErrorCode::InvalidArgument, "cannot write " + tmp.string());
        }
        out << content;
        if (!out.flush()) {
            throw Error(ErrorCode::InvalidArgument, "write failed for " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, path);
}

} // namespace ctrlgauge::io
