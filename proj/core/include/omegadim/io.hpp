#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "omegadim/construct.hpp"
#include "omegadim/dimension.hpp"
#include "omegadim/metrics.hpp"

namespace omegadim {

using Json = nlohmann::ordered_json;

// Doubles are emitted with 12 significant digits; rationals as "p/q" strings.
double round12(double v);

Json function_to_json(const LazyPLF& f);
LazyPLF function_from_json(const Json& j);
LazyPLF function_from_csv(const std::string& path);

Json certificate_to_json(const Certificate& c);
Json spectrum_plan_to_json(const SpectrumPlan& p);
SpectrumPlan spectrum_plan_from_json(const Json& j);
Json assouad_plan_to_json(const AssouadPlan& p);
AssouadPlan assouad_plan_from_json(const Json& j);

Json count_record_to_json(const CountRecord& r);
Json estimate_to_json(const DimensionEstimate& e);
Json seminorm_to_json(const SeminormEstimate& e);

// CSV with header kind,theta,r,R,count,method,anchor.
std::string counts_csv(const std::vector<CountRecord>& records, const std::string& kind,
                       double theta);
std::string profile_csv(const std::vector<std::pair<double, double>>& profile);

struct ExperimentConfig {
    std::string modulus;
    std::optional<std::string> theta, delta, epsilon;
    std::optional<int> stages;
    std::optional<std::string> mode;
    std::optional<long> precision_bits;
    std::optional<int> parallel;
    std::optional<std::uint64_t> seed;
    std::optional<std::vector<std::string>> r_schedule;
    std::optional<std::vector<std::string>> theta_grid;
    std::optional<std::string> out_prefix;

    Json to_json() const;
    static ExperimentConfig from_json(const Json& j);
};

// Minimal structural validation: checks "type"/"required"/"properties" of the
// shipped schema documents.
bool validate_against_schema(const Json& doc, const Json& schema, std::string* error = nullptr);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);
Json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

}  // namespace omegadim
