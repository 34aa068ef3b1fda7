#include "qrep/cli.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <mutex>
#include <ostream>
#include <thread>

#include <json.hpp>

#include "qrep/errors.hpp"
#include "qrep/purification.hpp"
#include "qrep/thresholds.hpp"

namespace qrep::cli {

std::string_view to_string(Command c) {
  switch (c) {
    case Command::kThreshold: return "threshold";
    case Command::kQMinCurve: return "q-min-curve";
    case Command::kConnectLevels: return "connect-levels";
    case Command::kMaxDistance: return "max-distance";
    case Command::kMbRegion: return "mb-region";
    case Command::kIonRates: return "ion-rates";
    case Command::kIonFidelity: return "ion-fidelity";
    case Command::kStorage: return "storage";
  }
  return "?";
}

namespace {

bool is_threshold_target(const std::string& s) {
  return s == "alternating" || s == "alt" || s == "mlf" || s == "lw" || s == "mb" ||
         s == "distill-ghz3" || s == "distill-bell";
}

template <class T>
void require_nonempty(const std::vector<T>& grid, const char* field) {
  if (grid.empty()) throw ConfigError(std::string(field) + ": grid is empty");
}

void require_unit(const std::vector<double>& grid, const char* field) {
  for (double v : grid) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw ConfigError(std::string(field) + ": value " + std::to_string(v) +
                        " outside [0,1]");
    }
  }
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

using RowFn = std::function<std::vector<Cell>(std::size_t)>;

// Evaluates rows on `jobs` threads; rows land at their own index. A library
// error inside one point becomes that row's status, the other cells empty.
std::vector<std::vector<Cell>> evaluate(std::size_t count, std::size_t width, unsigned jobs,
                                        const RowFn& fn) {
  std::vector<std::vector<Cell>> rows(count);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        rows[i] = fn(i);
      } catch (const Error& e) {
        rows[i] = std::vector<Cell>(width);
        rows[i].back() = std::string("error: ") + e.what();
      } catch (...) {
        const std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const unsigned threads = static_cast<unsigned>(
      std::min<std::size_t>(std::max(1u, jobs), std::max<std::size_t>(count, 1)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return rows;
}

ResultTable threshold_table(const SweepConfig& c) {
  ResultTable t{{"scheme", "threshold[1]", "status"}, {}};
  t.rows = evaluate(c.schemes.size(), 3, c.jobs, [&](std::size_t i) {
    const std::string& s = c.schemes[i];
    double value;
    if (s == "mb") {
      value = mb_asymptotic_threshold();
    } else if (s == "distill-ghz3") {
      value = ldn_distillability_threshold(3);
    } else if (s == "distill-bell") {
      value = bell_distillability_threshold();
    } else {
      value = gate_threshold(parse_scheme(s), c.tol);
    }
    return std::vector<Cell>{s, value, std::string("ok")};
  });
  return t;
}

ResultTable q_min_table(const SweepConfig& c) {
  ResultTable t{{"scheme", "p[1]", "q_min[1]", "status"}, {}};
  const std::size_t np = c.p.size();
  t.rows = evaluate(c.schemes.size() * np, 4, c.jobs, [&](std::size_t i) {
    const std::string& s = c.schemes[i / np];
    const double p = c.p[i % np];
    const ThresholdCurve curve = q_min_curve({p}, parse_scheme(s), c.tol);
    const auto& q = curve.samples.front().q_min;
    if (!q) return std::vector<Cell>{s, p, std::monostate{}, std::string("undefined")};
    return std::vector<Cell>{s, p, *q, std::string("ok")};
  });
  return t;
}

ResultTable connect_levels_table(const SweepConfig& c) {
  if (c.solve_q) {
    ResultTable t{{"p[1]", "n", "q_th[1]", "status"}, {}};
    const std::size_t nn = c.n.size();
    t.rows = evaluate(c.p.size() * nn, 4, c.jobs, [&](std::size_t i) {
      const double p = c.p[i / nn];
      const int n = c.n[i % nn];
      return std::vector<Cell>{p, std::int64_t{n},
                               channel_threshold_after_levels(n, p, c.tol * 1e-3),
                               std::string("ok")};
    });
    return t;
  }
  ResultTable t{{"p[1]", "q[1]", "n", "mode", "fidelity[1]", "success_prob[1]",
                 "joint_success_prob[1]", "distillable", "status"},
                {}};
  // Without a q grid every p is paired with q = p.
  const std::vector<double> qs = c.q;
  const std::size_t nq = qs.empty() ? 1 : qs.size();
  const std::size_t nn = c.n.size();
  t.rows = evaluate(c.p.size() * nq * nn, 9, c.jobs, [&](std::size_t i) {
    const double p = c.p[i / (nq * nn)];
    const double q = qs.empty() ? p : qs[(i / nn) % nq];
    const int n = c.n[i % nn];
    const LevelsResult r = connect_n_levels(elementary_state(q), p, n, c.mode);
    return std::vector<Cell>{p,
                             q,
                             std::int64_t{n},
                             std::string(to_string(c.mode)),
                             fidelity_of(r.state),
                             r.level_success.back(),
                             r.joint_success,
                             is_distillable(r.state),
                             std::string("ok")};
  });
  return t;
}

ResultTable max_distance_table(const SweepConfig& c) {
  ResultTable t{{"p[1]", "q[1]", "levels", "distance[links]", "unbounded", "status"}, {}};
  const std::vector<double> qs = c.q.empty() ? std::vector<double>{1.0} : c.q;
  const std::size_t nq = qs.size();
  t.rows = evaluate(c.p.size() * nq, 6, c.jobs, [&](std::size_t i) {
    const double p = c.p[i / nq];
    const double q = qs[i % nq];
    const DistanceResult r = max_distance(p, q, 40, c.mode);
    return std::vector<Cell>{p, q, std::int64_t{r.levels},
                             static_cast<std::int64_t>(r.distance), r.unbounded,
                             std::string("ok")};
  });
  return t;
}

ResultTable mb_region_table(const SweepConfig& c) {
  ResultTable t{{"p[1]", "q[1]", "m", "gain", "delta_fidelity[1]", "status"}, {}};
  const std::size_t nq = c.q.size(), nm = c.m.size();
  t.rows = evaluate(c.p.size() * nq * nm, 6, c.jobs, [&](std::size_t i) {
    const double p = c.p[i / (nq * nm)];
    const double q = c.q[(i / nm) % nq];
    const int m = c.m[i % nm];
    const MbCycleResult r = mb_finite_cycle(p, q, m);
    return std::vector<Cell>{p, q, std::int64_t{m}, r.gain, r.delta_fidelity,
                             std::string("ok")};
  });
  return t;
}

ResultTable ion_rates_table(const SweepConfig& c) {
  ResultTable t{{"total_distance[km]", "n_links", "l0[km]", "p_elem_2d[1]", "p_elem_1d[1]",
                 "time_2d[s]", "time_1d[s]", "time_2d_mc[s]", "time_2d_mc_stderr[s]",
                 "status"},
                {}};
  const std::size_t nl = c.links.size();
  t.rows = evaluate(c.distance_km.size() * nl, 10, c.jobs, [&](std::size_t i) {
    const LinkTopology topo{c.distance_km[i / nl], c.links[i % nl]};
    const double l0 = topo.l0();
    const int n = topo.levels();
    const double pe2 = p_elem_2d(l0, c.ion);
    const double pe1 = p_elem_1d(l0, c.ion);
    const auto slots = static_cast<std::uint64_t>(std::llround(std::pow(3.0, n)));
    const MonteCarloEstimate mc =
        simulate_rounds(pe2, slots, c.trials, c.seed + 0x9e3779b97f4a7c15ULL * i);
    const double unit = l0 / c.ion.c_fiber;
    return std::vector<Cell>{topo.total_distance,
                             std::int64_t{topo.n_links},
                             l0,
                             pe2,
                             pe1,
                             time_2d(l0, n, c.ion),
                             time_1d(l0, n, c.p_suc, c.ion),
                             unit * mc.mean,
                             unit * mc.std_error,
                             std::string("ok")};
  });
  return t;
}

ResultTable ion_fidelity_table(const SweepConfig& c) {
  ResultTable t{{"approach", "n_links", "fidelity[1]", "status"}, {}};
  t.rows = evaluate(c.links.size() * 2, 4, c.jobs, [&](std::size_t i) {
    const int links = c.links[i / 2];
    const bool two_d = i % 2 == 1;
    const double f = two_d ? fidelity_2d(links, c.ion, c.mode) : fidelity_1d(links, c.ion);
    return std::vector<Cell>{std::string(two_d ? "2D" : "1D"), std::int64_t{links}, f,
                             std::string("ok")};
  });
  return t;
}

ResultTable storage_table(const SweepConfig& c) {
  ResultTable t{{"strategy", "levels", "qubits", "status"}, {}};
  const std::size_t nn = c.n.size();
  t.rows = evaluate(c.strategies.size() * nn, 4, c.jobs, [&](std::size_t i) {
    const std::string& s = c.strategies[i / nn];
    const int levels = c.n[i % nn];
    return std::vector<Cell>{s, std::int64_t{levels},
                             std::int64_t{storage_count(parse_storage_strategy(s), levels)},
                             std::string("ok")};
  });
  return t;
}

}  // namespace

void SweepConfig::validate() const {
  if (!(tol > 0.0)) throw ConfigError("tol: must be positive");
  if (jobs < 1) throw ConfigError("jobs: must be at least 1");
  require_unit(p, "p");
  require_unit(q, "q");
  switch (command) {
    case Command::kThreshold:
      require_nonempty(schemes, "scheme");
      for (const auto& s : schemes) {
        if (!is_threshold_target(s)) throw ConfigError("scheme: unknown value '" + s + "'");
      }
      break;
    case Command::kQMinCurve:
      require_nonempty(schemes, "scheme");
      require_nonempty(p, "p");
      for (const auto& s : schemes) {
        if (s != "alternating" && s != "alt" && s != "mlf" && s != "lw") {
          throw ConfigError("scheme: unknown value '" + s + "'");
        }
      }
      break;
    case Command::kConnectLevels:
      require_nonempty(p, "p");
      require_nonempty(n, "n");
      for (int v : n) {
        if (v < 1 || v > 60) throw ConfigError("n: levels must lie in [1, 60]");
      }
      break;
    case Command::kMaxDistance:
      require_nonempty(p, "p");
      break;
    case Command::kMbRegion:
      require_nonempty(p, "p");
      require_nonempty(q, "q");
      require_nonempty(m, "m");
      for (int v : m) {
        if (v < 1) throw ConfigError("m: rounds must be at least 1");
      }
      break;
    case Command::kIonRates:
    case Command::kIonFidelity:
      if (command == Command::kIonRates) {
        require_nonempty(distance_km, "distance");
        for (double d : distance_km) {
          if (!(d >= 0.0)) throw ConfigError("distance: must be non-negative");
        }
        if (trials < 2) throw ConfigError("trials: need at least 2");
        if (!(p_suc > 0.0 && p_suc <= 1.0)) throw ConfigError("p-suc: must lie in (0,1]");
      }
      require_nonempty(links, "links");
      for (int l : links) {
        if (l < 2 || (l & (l - 1)) != 0) {
          throw ConfigError("links: " + std::to_string(l) + " is not a power of two >= 2");
        }
      }
      try {
        ion.validate();
      } catch (const InputError& e) {
        throw ConfigError(std::string("ion parameters: ") + e.what());
      }
      break;
    case Command::kStorage:
      require_nonempty(strategies, "strategy");
      require_nonempty(n, "levels");
      for (const auto& s : strategies) {
        try {
          parse_storage_strategy(s);
        } catch (const InputError&) {
          throw ConfigError("strategy: unknown value '" + s + "'");
        }
      }
      for (int v : n) {
        if (v < 0) throw ConfigError("levels: must be non-negative");
      }
      break;
  }
}

ResultTable run(const SweepConfig& config) {
  config.validate();
  switch (config.command) {
    case Command::kThreshold: return threshold_table(config);
    case Command::kQMinCurve: return q_min_table(config);
    case Command::kConnectLevels: return connect_levels_table(config);
    case Command::kMaxDistance: return max_distance_table(config);
    case Command::kMbRegion: return mb_region_table(config);
    case Command::kIonRates: return ion_rates_table(config);
    case Command::kIonFidelity: return ion_fidelity_table(config);
    case Command::kStorage: return storage_table(config);
  }
  throw ConfigError("unknown command");
}

std::vector<double> expand_grid(const std::vector<std::string>& tokens, const char* field) {
  auto number = [&](std::string_view s) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
      throw ConfigError(std::string(field) + ": cannot parse '" + std::string(s) + "'");
    }
    return v;
  };
  std::vector<double> out;
  for (const std::string& token : tokens) {
    const auto first = token.find(':');
    if (first == std::string::npos) {
      out.push_back(number(token));
      continue;
    }
    const auto second = token.find(':', first + 1);
    if (second == std::string::npos) {
      throw ConfigError(std::string(field) + ": range '" + token + "' needs start:stop:step");
    }
    const std::string_view view(token);
    const double start = number(view.substr(0, first));
    const double stop = number(view.substr(first + 1, second - first - 1));
    const double step = number(view.substr(second + 1));
    if (!(step > 0.0) || stop < start) {
      throw ConfigError(std::string(field) + ": range '" + token + "' is empty");
    }
    const auto count = static_cast<long>(std::floor((stop - start) / step + 0.5));
    if (count > 1000000) throw ConfigError(std::string(field) + ": range too long");
    for (long k = 0; k <= count; ++k) out.push_back(start + static_cast<double>(k) * step);
  }
  return out;
}

void write_csv(std::ostream& out, const ResultTable& table) {
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    out << (i ? "," : "") << csv_escape(table.columns[i]);
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      std::visit(
          [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, bool>) out << (v ? "true" : "false");
            else if constexpr (std::is_same_v<T, std::int64_t>) out << v;
            else if constexpr (std::is_same_v<T, double>) out << format_double(v);
            else if constexpr (std::is_same_v<T, std::string>) out << csv_escape(v);
          },
          row[i]);
    }
    out << '\n';
  }
}

void write_json_lines(std::ostream& out, const ResultTable& table) {
  for (const auto& row : table.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::visit(
          [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::monostate>) obj[table.columns[i]] = nullptr;
            else if constexpr (std::is_same_v<T, double>) {
              if (std::isfinite(v)) obj[table.columns[i]] = v;
              else obj[table.columns[i]] = format_double(v);
            } else obj[table.columns[i]] = v;
          },
          row[i]);
    }
    out << obj.dump() << '\n';
  }
}

}  // namespace qrep::cli
