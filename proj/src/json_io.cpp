#include "flexsched/json_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace flexsched {

namespace {

using ordered_json = nlohmann::ordered_json;

// report numbers pass through %.12g so identical runs serialize identically
double rounded(double v) { return std::stod(format_number(v)); }

ordered_json cost_to_json(const CostModel& cost) {
  ordered_json j;
  j["kind"] = to_string(cost.kind);
  ordered_json params = ordered_json::object();
  if (cost.kind == CostKind::Linear) params["slopes"] = cost.linear_slopes;
  if (cost.kind == CostKind::PiecewiseLinear) {
    params["slopes"] = cost.pwl_slopes;
    params["intercepts"] = cost.pwl_intercepts;
  }
  j["params"] = params;
  j["lipschitz"] = cost.lipschitz;
  j["load_max"] = cost.load_max;
  return j;
}

CostModel cost_from_json(const ordered_json& j) {
  CostModel cost;
  cost.kind = cost_kind_from_string(j.at("kind").get<std::string>());
  cost.load_max = j.at("load_max").get<double>();
  cost.lipschitz = j.value("lipschitz", 0.0);
  if (j.contains("params")) {
    const auto& params = j.at("params");
    if (params.contains("slopes"))
      cost.linear_slopes = params.at("slopes").get<std::vector<double>>();
    if (cost.kind == CostKind::PiecewiseLinear) {
      cost.pwl_slopes = params.at("slopes").get<std::vector<double>>();
      cost.pwl_intercepts = params.at("intercepts").get<std::vector<double>>();
      cost.linear_slopes.clear();
    }
  }
  if (cost.lipschitz == 0.0) {
    switch (cost.kind) {
      case CostKind::QuadraticTracking:
      case CostKind::QuadraticPure:
        cost.lipschitz = 2.0 * cost.load_max;
        break;
      case CostKind::Linear:
        for (double s : cost.linear_slopes)
          cost.lipschitz = std::max(cost.lipschitz, std::abs(s));
        break;
      case CostKind::PiecewiseLinear:
        for (double s : cost.pwl_slopes)
          cost.lipschitz = std::max(cost.lipschitz, std::abs(s));
        break;
    }
  }
  cost.validate();
  return cost;
}

ordered_json renewable_model_to_json(const RenewableModel& model) {
  ordered_json j;
  j["kind"] = "truncated_gaussian_iid";
  j["mean"] = model.mean;
  j["std"] = model.stddev;
  j["support"] = {model.lo, model.hi};
  j["seed"] = model.seed;
  return j;
}

RenewableModel renewable_model_from_json(const ordered_json& j) {
  RenewableModel model;
  if (j.value("kind", "truncated_gaussian_iid") != "truncated_gaussian_iid")
    throw InvalidArgument("unknown renewable model kind");
  model.mean = j.at("mean").get<double>();
  model.stddev = j.at("std").get<double>();
  auto support = j.at("support").get<std::vector<double>>();
  if (support.size() != 2) throw InvalidArgument("renewable support must be [lo, hi]");
  model.lo = support[0];
  model.hi = support[1];
  model.seed = j.value("seed", 0ull);
  model.validate();
  return model;
}

ordered_json instance_to_ordered_json(const Instance& instance,
                                      const std::optional<RenewableModel>& model) {
  ordered_json j;
  j["horizon"] = instance.horizon;
  j["cost"] = cost_to_json(instance.cost);
  if (!instance.renewable.empty()) j["renewable"] = instance.renewable;
  ordered_json jobs = ordered_json::array();
  for (const Job& job : instance.jobs) {
    ordered_json item;
    item["id"] = job.id;
    item["arrival"] = job.arrival;
    item["deadline"] = job.deadline;
    item["duration"] = job.duration;
    item["kind"] = to_string(job.shape_kind);
    item["shape"] = job.power_shape;
    jobs.push_back(std::move(item));
  }
  j["jobs"] = std::move(jobs);
  if (model) {
    ordered_json stoch;
    stoch["renewable"] = renewable_model_to_json(*model);
    stoch["cost"] = {{"kind", "expected_shortfall"}};
    j["stochastic"] = std::move(stoch);
  }
  return j;
}

}  // namespace

std::string instance_to_json(const Instance& instance,
                             const std::optional<RenewableModel>& model) {
  return instance_to_ordered_json(instance, model).dump(2);
}

InstanceBundle instance_from_json(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& ex) {
    throw ParseError(std::string("instance JSON: ") + ex.what(), 0);
  }
  InstanceBundle bundle;
  Instance& instance = bundle.instance;
  instance.horizon = j.at("horizon").get<int>();
  instance.cost = cost_from_json(j.at("cost"));
  if (j.contains("renewable"))
    instance.renewable = j.at("renewable").get<std::vector<double>>();
  for (const auto& item : j.at("jobs")) {
    Job job;
    job.id = item.value("id", static_cast<int>(instance.jobs.size()));
    job.arrival = item.at("arrival").get<int>();
    job.deadline = item.at("deadline").get<int>();
    job.duration = item.at("duration").get<int>();
    job.power_shape = item.at("shape").get<std::vector<double>>();
    job.shape_kind = shape_kind_from_string(item.value("kind", "realistic"));
    instance.jobs.push_back(std::move(job));
  }
  if (j.contains("stochastic"))
    bundle.renewable_model =
        renewable_model_from_json(j.at("stochastic").at("renewable"));
  instance.validate();
  return bundle;
}

InstanceBundle load_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open instance file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return instance_from_json(buf.str());
}

void save_instance_file(const std::string& path, const Instance& instance,
                        const std::optional<RenewableModel>& model) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write instance file: " + path);
  out << instance_to_json(instance, model) << "\n";
}

std::string schedule_to_json(const ScheduleMatrix& schedule) {
  ordered_json j;
  j["jobs"] = schedule.num_jobs;
  j["horizon"] = schedule.horizon;
  j["integrality_tolerance"] = schedule.integrality_tolerance;
  ordered_json triplets = ordered_json::array();
  for (int row = 0; row < schedule.num_jobs; ++row)
    for (int t = 1; t <= schedule.horizon; ++t) {
      double v = schedule.at(row, t);
      if (v > schedule.integrality_tolerance) triplets.push_back({row, t, rounded(v)});
    }
  j["entries"] = std::move(triplets);
  return j.dump(2);
}

ScheduleMatrix schedule_from_json(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& ex) {
    throw ParseError(std::string("schedule JSON: ") + ex.what(), 0);
  }
  ScheduleMatrix s = ScheduleMatrix::zeros(j.at("jobs").get<int>(),
                                           j.at("horizon").get<int>(),
                                           j.value("integrality_tolerance", 1e-9));
  for (const auto& triplet : j.at("entries"))
    s.at(triplet.at(0).get<int>(), triplet.at(1).get<int>()) =
        triplet.at(2).get<double>();
  return s;
}

std::string relax_solution_to_json(const RelaxSolution& solution) {
  ordered_json j;
  j["objective"] = rounded(solution.objective);
  j["gap_certificate"] = rounded(solution.gap_certificate);
  j["iterations"] = solution.iterations;
  j["converged"] = solution.converged;
  ordered_json load = ordered_json::array();
  for (double v : solution.load.values) load.push_back(rounded(v));
  j["load"] = std::move(load);
  ordered_json prices = ordered_json::array();
  for (double v : solution.prices.values) prices.push_back(rounded(v));
  j["prices"] = std::move(prices);
  j["price_kink_slots"] = solution.prices.kink_slots;
  ordered_json triplets = ordered_json::array();
  const ScheduleMatrix& s = solution.schedule;
  for (int row = 0; row < s.num_jobs; ++row)
    for (int t = 1; t <= s.horizon; ++t)
      if (s.at(row, t) > s.integrality_tolerance)
        triplets.push_back({row, t, rounded(s.at(row, t))});
  j["schedule"] = std::move(triplets);
  return j.dump(2);
}

std::string run_report_to_json(const RunReport& report) {
  ordered_json j;
  j["instance"] = {{"jobs", report.num_jobs},
                   {"horizon", report.horizon},
                   {"max_duration", report.max_duration},
                   {"total_energy", rounded(report.total_energy)}};
  j["seed"] = report.seed;
  ordered_json results = ordered_json::array();
  for (const AlgoResult& r : report.results) {
    ordered_json item;
    item["algo"] = r.algo;
    item["cost"] = rounded(r.cost);
    if (r.subopt_pct) item["subopt_pct"] = rounded(*r.subopt_pct);
    item["wall_ms"] = rounded(r.wall_ms);
    if (r.fractional_before >= 0) {
      item["fractional_before"] = r.fractional_before;
      item["fractional_after"] = r.fractional_after;
    }
    if (r.gap_certificate) item["gap_certificate"] = rounded(*r.gap_certificate);
    if (r.adjust_wall_ms) item["adjust_wall_ms"] = rounded(*r.adjust_wall_ms);
    if (r.oracle_nodes) item["oracle_nodes"] = *r.oracle_nodes;
    if (r.max_payment_residual)
      item["max_payment_residual"] = rounded(*r.max_payment_residual);
    if (r.payment_flags) item["payment_flags"] = *r.payment_flags;
    if (r.self_scheduling_violations)
      item["self_scheduling_violations"] = *r.self_scheduling_violations;
    results.push_back(std::move(item));
  }
  j["results"] = std::move(results);
  return j.dump(2);
}

}  // namespace flexsched
