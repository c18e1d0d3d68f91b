#ifndef GG1_IO_HPP
#define GG1_IO_HPP

#include <filesystem>
#include <span>
#include <string>

#include <nlohmann/json.hpp>

#include "gg1/distributions.hpp"
#include "gg1/inspection.hpp"
#include "gg1/mdp.hpp"
#include "gg1/metrics.hpp"
#include "gg1/renewal.hpp"
#include "gg1/simulator.hpp"

namespace gg1 {

using nlohmann::json;

json to_json(const DistributionSpec& spec);
DistributionSpec distribution_from_json(const json& j);

json to_json(const MetricsReport& report);

json to_json(const MdpInstance<double>& instance);
json to_json(const MdpSolution<double>& solution, const MdpInstance<double>& instance);

/// Shortest text that reads back to the same double.
std::string format_number(double x);

// CSV writers; each throws std::runtime_error naming the file on failure.
void write_customer_csv(const CustomerLedger& ledger, const std::filesystem::path& file);
void write_path_csv(const Trajectory& path, const std::filesystem::path& file);
void write_cycles_csv(const RenewalCycles& cycles, std::span<const double> rewards, std::span<const double> counts,
                      const std::filesystem::path& file);
void write_inspections_csv(std::span<const InspectionSample> samples, const std::filesystem::path& file);
void write_pdf_csv(const DistributionSpec& service, std::span<const double> grid, const std::filesystem::path& file);

void write_text(const std::filesystem::path& file, const std::string& content);
json read_json(const std::filesystem::path& file);

}  // namespace gg1

#endif  // GG1_IO_HPP
