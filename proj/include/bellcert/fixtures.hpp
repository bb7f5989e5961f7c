#pragma once

// Outcome counts of the published runs and their reconstruction as event
// sequences.

#include <string>
#include <string_view>
#include <vector>

#include "bellcert/events.hpp"

namespace bellcert {

struct PublishedRun {
  std::string id;
  std::string label;
  CorrelationTable table;
};

/// nov27, apr07, apr15, jun14 and all (every run of the campaign combined).
const std::vector<PublishedRun>& published_runs();

/// Throws DomainError for an unknown id.
const PublishedRun& published_run(std::string_view id);

/// Events whose counts equal `table`. Within each herald the records follow
/// the cell order (α,β), (α,β′), (α′,β), (α′,β′) and, inside a cell, ↑↑, ↑↓,
/// ↓↑, ↓↓; the two heralds are interleaved round-robin starting with Ψ⁺.
/// The ordering is synthetic.
RunDataset reconstruct_dataset(const CorrelationTable& table,
                               std::string run_id = {});

}  // namespace bellcert
