#include "bellcert/fixtures.hpp"

#include <array>

#include "bellcert/error.hpp"

namespace bellcert {

namespace {

using Cells = std::array<std::array<std::uint64_t, 4>, 4>;

// Cells in the order (α,β), (α,β′), (α′,β), (α′,β′); counts ↑↑, ↑↓, ↓↑, ↓↓.
CorrelationTable make_table(const Cells& psi_plus, const Cells& psi_minus) {
  CorrelationTable t;
  for (Herald h : kHeralds) {
    const Cells& cells = h == Herald::psi_plus ? psi_plus : psi_minus;
    for (std::size_t i = 0; i < 4; ++i) {
      OutcomeCounts& c = t.cell(h, kChoices[i / 2], kChoices[i % 2]);
      c = {cells[i][0], cells[i][1], cells[i][2], cells[i][3]};
    }
  }
  return t;
}

std::vector<PublishedRun> build() {
  std::vector<PublishedRun> runs;
  runs.push_back({"nov27", "Nov 27 2015",
                  make_table({{{4, 16, 21, 4}, {4, 12, 13, 4}, {3, 24, 11, 2},
                               {10, 4, 8, 10}}},
                             {{{4, 11, 17, 2}, {4, 16, 13, 3}, {22, 4, 2, 10},
                               {4, 19, 16, 3}}})});
  runs.push_back({"apr07", "Apr 7 2016",
                  make_table({{{60, 182, 164, 47}, {50, 182, 196, 47},
                               {51, 168, 182, 29}, {195, 60, 62, 159}}},
                             {{{62, 192, 175, 73}, {31, 189, 184, 29},
                               {213, 38, 44, 187}, {77, 166, 165, 52}}})});
  runs.push_back({"apr15", "Apr 15 2016",
                  make_table({{{154, 483, 471, 135}, {135, 471, 507, 107},
                               {134, 499, 513, 117}, {489, 160, 182, 443}}},
                             {{{168, 443, 536, 149}, {122, 492, 510, 117},
                               {535, 115, 128, 461}, {172, 439, 483, 130}}})});
  runs.push_back({"jun14", "Jun 14 2016",
                  make_table({{{118, 483, 510, 146}, {144, 482, 450, 185},
                               {161, 441, 427, 173}, {506, 158, 127, 489}}},
                             {{{133, 533, 537, 105}, {162, 466, 410, 207},
                               {431, 159, 160, 454}, {104, 523, 484, 132}}})});
  runs.push_back({"all", "All runs combined",
                  make_table({{{778, 2621, 2770, 804}, {809, 2629, 2708, 816},
                               {873, 2686, 2644, 730}, {2696, 966, 902, 2453}}},
                             {{{817, 2596, 2873, 742}, {696, 2570, 2788, 772},
                               {2783, 787, 840, 2503}, {865, 2620, 2640, 791}}})});
  return runs;
}

std::vector<TrialRecord> expand(const CorrelationTable& table, Herald h) {
  std::vector<TrialRecord> out;
  out.reserve(table.total(h));
  for (Choice a : kChoices) {
    for (Choice b : kChoices) {
      const OutcomeCounts& c = table.cell(h, a, b);
      const std::array<std::pair<std::uint64_t, std::pair<Outcome, Outcome>>, 4>
          groups{{{c.up_up, {Outcome::up, Outcome::up}},
                  {c.up_down, {Outcome::up, Outcome::down}},
                  {c.down_up, {Outcome::down, Outcome::up}},
                  {c.down_down, {Outcome::down, Outcome::down}}}};
      for (const auto& [n, xy] : groups) {
        for (std::uint64_t k = 0; k < n; ++k) {
          TrialRecord r;
          r.herald = h;
          r.a = a;
          r.b = b;
          r.x = xy.first;
          r.y = xy.second;
          out.push_back(r);
        }
      }
    }
  }
  return out;
}

}  // namespace

const std::vector<PublishedRun>& published_runs() {
  static const std::vector<PublishedRun> runs = build();
  return runs;
}

const PublishedRun& published_run(std::string_view id) {
  for (const auto& r : published_runs())
    if (r.id == id) return r;
  throw DomainError("unknown published run '" + std::string(id) + "'");
}

RunDataset reconstruct_dataset(const CorrelationTable& table, std::string run_id) {
  const auto plus = expand(table, Herald::psi_plus);
  const auto minus = expand(table, Herald::psi_minus);
  RunDataset ds;
  ds.run_id = std::move(run_id);
  ds.records.reserve(plus.size() + minus.size());
  std::size_t i = 0, j = 0;
  while (i < plus.size() || j < minus.size()) {
    if (i < plus.size()) ds.records.push_back(plus[i++]);
    if (j < minus.size()) ds.records.push_back(minus[j++]);
  }
  for (std::size_t k = 0; k < ds.records.size(); ++k) ds.records[k].index = k + 1;
  return ds;
}

}  // namespace bellcert
