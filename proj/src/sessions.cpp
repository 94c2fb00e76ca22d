#include "flexsched/sessions.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace flexsched {

namespace {

// days since epoch for a civil date (Howard Hinnant's algorithm)
long days_from_civil(int y, int m, int d) {
  y -= m <= 2;
  const long era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153u * (static_cast<unsigned>(m) + (m > 2 ? -3 : 9)) + 2) / 5 +
                       static_cast<unsigned>(d) - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<long>(doe) - 719468;
}

struct Timestamp {
  bool has_date = false;
  long day = 0;     // days since epoch when has_date
  double hours = 0; // hours within the day (or absolute, when no date)
};

bool parse_timestamp(const std::string& field, Timestamp* out) {
  int y, mo, d, h, mi, s;
  if (std::sscanf(field.c_str(), "%d-%d-%d %d:%d:%d", &y, &mo, &d, &h, &mi, &s) == 6) {
    *out = {true, days_from_civil(y, mo, d), h + mi / 60.0 + s / 3600.0};
    return true;
  }
  if (std::sscanf(field.c_str(), "%d-%d-%d %d:%d", &y, &mo, &d, &h, &mi) == 5) {
    *out = {true, days_from_civil(y, mo, d), h + mi / 60.0};
    return true;
  }
  if (std::sscanf(field.c_str(), "%d:%d", &h, &mi) == 2 &&
      field.find('-') == std::string::npos) {
    *out = {false, 0, h + mi / 60.0};
    return true;
  }
  char* end = nullptr;
  double v = std::strtod(field.c_str(), &end);
  if (end && end != field.c_str() && *end == '\0') {
    *out = {false, 0, v};
    return true;
  }
  return false;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, sep)) {
    // trim
    size_t a = field.find_first_not_of(" \t\r");
    size_t b = field.find_last_not_of(" \t\r");
    out.push_back(a == std::string::npos ? "" : field.substr(a, b - a + 1));
  }
  return out;
}

// chunk-average a relative series down to `bins` weights, sum-preserving
std::vector<double> rebin(const std::vector<double>& series, int bins) {
  std::vector<double> out(static_cast<size_t>(bins), 0.0);
  const int n = static_cast<int>(series.size());
  for (int i = 0; i < n; ++i) {
    int b = std::min(bins - 1, i * bins / n);
    out[static_cast<size_t>(b)] += series[static_cast<size_t>(i)];
  }
  return out;
}

}  // namespace

SessionLoadResult parse_sessions_csv(const std::string& text, double slot_hours,
                                     int horizon) {
  if (slot_hours <= 0) throw InvalidArgument("sessions: slot_hours must be > 0");
  if (horizon < 1) throw InvalidArgument("sessions: horizon must be >= 1");

  SessionLoadResult result;
  result.instance.horizon = horizon;

  std::istringstream is(text);
  std::string line;
  int line_no = 0;
  bool header_seen = false;
  long base_day = -1;

  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (!header_seen) {
      header_seen = true;  // first non-empty row is the header
      continue;
    }
    auto fields = split(line, ',');
    if (fields.size() < 4)
      throw ParseError("sessions: expected at least 4 columns", line_no);

    Timestamp arrival, departure, completion;
    if (!parse_timestamp(fields[0], &arrival))
      throw ParseError("sessions: bad arrival timestamp '" + fields[0] + "'", line_no);
    if (!parse_timestamp(fields[1], &departure))
      throw ParseError("sessions: bad departure timestamp '" + fields[1] + "'", line_no);
    if (!parse_timestamp(fields[2], &completion))
      throw ParseError("sessions: bad completion timestamp '" + fields[2] + "'", line_no);
    char* end = nullptr;
    double energy = std::strtod(fields[3].c_str(), &end);
    if (!end || end == fields[3].c_str() || *end != '\0' || !(energy >= 0))
      throw ParseError("sessions: bad energy '" + fields[3] + "'", line_no);

    if (arrival.has_date && base_day < 0) base_day = arrival.day;
    auto absolute_hours = [&](const Timestamp& ts) {
      return ts.has_date ? (ts.day - base_day) * 24.0 + ts.hours : ts.hours;
    };
    const double t_arr = absolute_hours(arrival);
    const double t_dep = absolute_hours(departure);
    const double t_done = absolute_hours(completion);

    if (!(t_arr <= t_done && t_done <= t_dep)) {
      ++result.rows_skipped;
      result.warnings.push_back("line " + std::to_string(line_no) +
                                ": timestamps out of order, skipped");
      continue;
    }

    const int slot_arrival = static_cast<int>(std::floor(t_arr / slot_hours)) + 1;
    const int slot_departure = static_cast<int>(std::floor(t_dep / slot_hours)) + 1;
    // duration rounds up so delivered energy is never truncated
    int duration =
        std::max(1, static_cast<int>(std::ceil((t_done - t_arr) / slot_hours - 1e-12)));

    if (slot_arrival < 1 || slot_departure > horizon ||
        slot_arrival + duration - 1 > slot_departure) {
      ++result.rows_skipped;
      result.warnings.push_back("line " + std::to_string(line_no) +
                                ": discretized window infeasible, skipped");
      continue;
    }

    Job job;
    job.id = result.rows_loaded;
    job.arrival = slot_arrival;
    job.deadline = slot_departure;
    job.duration = duration;
    if (fields.size() >= 5 && !fields[4].empty()) {
      std::vector<double> series;
      for (const std::string& tok : split(fields[4], ';')) {
        if (tok.empty()) continue;
        series.push_back(std::strtod(tok.c_str(), nullptr));
      }
      if (series.empty())
        throw ParseError("sessions: empty current series", line_no);
      std::vector<double> weights = rebin(series, duration);
      double total = 0.0;
      for (double w : weights) total += w;
      job.power_shape.resize(static_cast<size_t>(duration));
      for (int i = 0; i < duration; ++i)
        job.power_shape[static_cast<size_t>(i)] =
            total > 0 ? energy * weights[static_cast<size_t>(i)] / total / slot_hours
                      : 0.0;
      job.shape_kind = ShapeKind::Realistic;
    } else {
      job.power_shape.assign(static_cast<size_t>(duration),
                             energy / duration / slot_hours);
      job.shape_kind = ShapeKind::Rectangular;
    }
    result.instance.jobs.push_back(std::move(job));
    ++result.rows_loaded;
  }

  double load_max = std::max(1e-9, result.instance.load_upper_bound());
  result.instance.cost = CostModel::quadratic_tracking(load_max, 0.0);
  result.instance.validate();
  return result;
}

SessionLoadResult load_sessions_csv(const std::string& path, double slot_hours,
                                    int horizon) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open sessions file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_sessions_csv(buf.str(), slot_hours, horizon);
}

}  // namespace flexsched
