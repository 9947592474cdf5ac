#pragma once

// Random two-agent micro-scenarios: agent x owns service a, agent y owns b. Each transition
// system has at most four states on a silent ring, a silent stay loop everywhere and at least
// one service self-loop.

#include <random>
#include <string>

#include "rhp/model.hpp"

namespace rhp::testing {

inline std::string random_ts(std::mt19937_64& rng, const std::string& svc, int max_states) {
  int n = 1 + static_cast<int>(rng() % max_states);
  std::string t = "states = [";
  for (int i = 0; i < n; ++i) t += (i ? ", \"s" : "\"s") + std::to_string(i) + "\"";
  t += "]\ninit = \"s0\"\ntransitions = [\n";
  bool served = false;
  for (int i = 0; i < n; ++i) {
    std::string s = "\"s" + std::to_string(i) + "\"";
    t += "  [" + s + ", \"stay\", " + s + ", \"eps\"],\n";
    if (n > 1) t += "  [" + s + ", \"next\", \"s" + std::to_string((i + 1) % n) + "\", \"eps\"],\n";
    if (n > 2 && rng() % 2) t += "  [" + s + ", \"jump\", \"s" + std::to_string(rng() % n) + "\", \"eps\"],\n";
    // Every agent can serve somewhere; the last state gets the service if nothing else did.
    if (rng() % 3 == 0 || (i + 1 == n && !served)) {
      t += "  [" + s + ", \"do\", " + s + ", \"{" + svc + "}\"],\n";
      served = true;
    }
    if (rng() % 5 == 0) t += "  [" + s + ", \"nothing\", " + s + ", \"{}\"],\n";
  }
  return t + "]\n";
}

inline const std::vector<std::string>& formula_pool() {
  static const std::vector<std::string> pool{
      "F a",         "G F a",        "F b",           "G F b",         "F (a & b)",   "G F (a & b)",
      "a U b",       "!a U b",       "G F a & G F b", "F (a & X b)",   "G !b",        "G F (a | b)",
      "F G !a",      "G (a | !b)",   "F a & G !b",    "G F (a & !b)",  "true",        "!b U (a & b)",
  };
  return pool;
}

inline std::string random_micro_scenario(std::mt19937_64& rng, std::uint64_t seed) {
  const auto& pool = formula_pool();
  std::string text = "[config]\nh = 2\nH = 3\nseed = " + std::to_string(seed) +
                     "\nstop_visits = 3\nmax_iters = 400\nduration = [1, 3]\n";
  text += "\n[agent.x]\nservices = [\"a\"]\n" + random_ts(rng, "a", 4);
  text += "\n[agent.y]\nservices = [\"b\"]\n" + random_ts(rng, "b", 4);
  text += "\n[task.x]\nformula = \"" + pool[rng() % pool.size()] + "\"\n";
  text += "\n[task.y]\nformula = \"" + pool[rng() % pool.size()] + "\"\n";
  return text;
}

}  // namespace rhp::testing
