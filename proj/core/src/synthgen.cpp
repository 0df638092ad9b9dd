#include "disruptix/synthgen.hpp"

#include <algorithm>
#include <unordered_set>

#include "disruptix/csv.hpp"
#include "disruptix/errors.hpp"
#include "disruptix/rng.hpp"

namespace disruptix {

namespace {

std::uint64_t edge_key(NodeId u, NodeId v, NodeId n) {
  return static_cast<std::uint64_t>(u) * static_cast<std::uint64_t>(n) +
         static_cast<std::uint64_t>(v);
}

}  // namespace

SynthConfig SynthConfig::defaults() { return SynthConfig{}; }

std::vector<double> SynthConfig::uniform_ref_weights(std::int32_t lo, std::int32_t hi) {
  if (lo < 1 || hi < lo) throw SchemaError("synth: need 1 <= lo <= hi for reference counts");
  std::vector<double> weights(static_cast<std::size_t>(hi), 0.0);
  for (std::int32_t k = lo; k <= hi; ++k) weights[static_cast<std::size_t>(k - 1)] = 1.0;
  return weights;
}

SynthResult generate(const SynthConfig& config) {
  const std::int32_t y0 = config.year_start;
  const std::int32_t y1 = config.year_end;
  if (y1 < y0) throw SchemaError("synth: year_end before year_start");
  const std::int32_t n_years = y1 - y0 + 1;
  if (config.nodes_per_year < 1) throw SchemaError("synth: nodes_per_year must be >= 1");

  std::vector<double> schedule = config.artefact_share_schedule;
  if (schedule.empty()) {
    schedule.resize(static_cast<std::size_t>(n_years));
    for (std::int32_t i = 0; i < n_years; ++i) {
      double f = n_years == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n_years - 1);
      schedule[static_cast<std::size_t>(i)] = 0.30 + f * (0.05 - 0.30);
    }
  }
  if (schedule.size() != static_cast<std::size_t>(n_years))
    throw SchemaError("synth: schedule length must equal the year count");
  for (double s : schedule)
    if (s < 0.0 || s > 1.0) throw SchemaError("synth: schedule shares must lie in [0,1]");
  double weight_total = 0.0;
  for (double w : config.ref_count_weights) {
    if (w < 0.0) throw SchemaError("synth: reference-count weights must be non-negative");
    weight_total += w;
  }
  if (!(weight_total > 0.0))
    throw SchemaError("synth: reference-count distribution has no mass");

  const NodeId n = static_cast<NodeId>(n_years * config.nodes_per_year);
  Rng rng(config.seed);

  // Pass 1: classes, fields, author counts, in cohort order.
  std::vector<SynthClass> truth(static_cast<std::size_t>(n), SynthClass::Normal);
  std::vector<NodeRecord> nodes(static_cast<std::size_t>(n));
  std::vector<double> field_weights;
  for (const auto& f : config.fields) field_weights.push_back(f.weight);
  auto year_of = [&](NodeId v) {
    return y0 + static_cast<std::int32_t>(v) / config.nodes_per_year;
  };
  auto first_of_year = [&](std::int32_t y) {
    return static_cast<NodeId>((y - y0) * config.nodes_per_year);
  };
  for (NodeId v = 0; v < n; ++v) {
    std::int32_t y = year_of(v);
    auto& rec = nodes[static_cast<std::size_t>(v)];
    rec.key = std::to_string(v);
    rec.year = y;
    if (!config.fields.empty())
      rec.field = config.fields[categorical(rng, field_weights)].label;
    if (config.max_authors > 0)
      rec.n_authors =
          1 + static_cast<std::int32_t>(uniform_below(rng, static_cast<std::uint64_t>(config.max_authors)));
    bool artefact = bernoulli(rng, schedule[static_cast<std::size_t>(y - y0)]);
    if (artefact) truth[static_cast<std::size_t>(v)] = SynthClass::Artefact;
    else if (y == y0) truth[static_cast<std::size_t>(v)] = SynthClass::Structural;
  }

  std::vector<std::pair<NodeId, NodeId>> edges;
  std::unordered_set<std::uint64_t> edge_set;
  std::vector<std::int32_t> in_deg(static_cast<std::size_t>(n), 0);
  auto add_edge = [&](NodeId citer, NodeId cited) {
    if (!edge_set.insert(edge_key(citer, cited, n)).second) return false;
    edges.emplace_back(citer, cited);
    ++in_deg[static_cast<std::size_t>(cited)];
    return true;
  };

  // Pass 2: references for normal nodes, drawn from the recency pool.
  for (NodeId v = 0; v < n; ++v) {
    if (truth[static_cast<std::size_t>(v)] != SynthClass::Normal) continue;
    std::int32_t y = year_of(v);
    if (y == y0) continue;
    std::int32_t pool_start_year =
        config.recency_years > 0 ? std::max(y0, y - config.recency_years) : y0;
    NodeId pool_begin = first_of_year(pool_start_year);
    NodeId pool_end = first_of_year(y);  // exclusive
    std::int64_t pool = pool_end - pool_begin;
    std::int32_t want =
        1 + static_cast<std::int32_t>(categorical(rng, config.ref_count_weights));
    want = static_cast<std::int32_t>(std::min<std::int64_t>(want, pool));

    std::int32_t made = 0;
    std::int64_t attempts = 0;
    const std::int64_t cap = 64 * static_cast<std::int64_t>(want) + 64;
    while (made < want && attempts < cap) {
      ++attempts;
      NodeId target;
      if (config.attachment == Attachment::UniformPast) {
        target = pool_begin + static_cast<NodeId>(uniform_below(rng, static_cast<std::uint64_t>(pool)));
      } else {
        // weight 1 + current in-degree
        std::int64_t total = pool;
        for (NodeId t = pool_begin; t < pool_end; ++t)
          total += in_deg[static_cast<std::size_t>(t)];
        std::int64_t x = static_cast<std::int64_t>(uniform_below(rng, static_cast<std::uint64_t>(total)));
        target = pool_end - 1;
        for (NodeId t = pool_begin; t < pool_end; ++t) {
          x -= 1 + in_deg[static_cast<std::size_t>(t)];
          if (x < 0) {
            target = t;
            break;
          }
        }
      }
      if (add_edge(v, target)) ++made;
    }
    // Deterministic fill in id order if rejection stalled on a tiny pool.
    for (NodeId t = pool_begin; made < want && t < pool_end; ++t)
      if (add_edge(v, t)) ++made;
  }

  // Pass 3: guaranteed forward citation for artefact nodes. The citer
  // comes from the next cohort (same cohort for the final year) and must
  // itself be a referencing node, so artefact citers stay reference-free.
  for (NodeId v = 0; v < n; ++v) {
    if (truth[static_cast<std::size_t>(v)] != SynthClass::Artefact) continue;
    std::int32_t y = year_of(v);
    NodeId citer = -1;
    for (std::int32_t yt = std::min<std::int32_t>(y + 1, y1); yt <= y1 && citer < 0; ++yt) {
      NodeId begin = first_of_year(yt);
      NodeId end = begin + config.nodes_per_year;
      std::vector<NodeId> candidates;
      for (NodeId c = begin; c < end; ++c)
        if (truth[static_cast<std::size_t>(c)] == SynthClass::Normal && c != v)
          candidates.push_back(c);
      if (!candidates.empty())
        citer = candidates[uniform_below(rng, candidates.size())];
    }
    if (citer < 0)
      throw SchemaError("synth: no eligible citer for an artefact node; lower the schedule");
    add_edge(citer, v);  // no-op when the citer already cites v
  }

  SynthResult result{CitationGraph::build(DateKind::YearOnly, std::move(nodes), std::move(edges)),
                     std::move(truth)};
  return result;
}

void write_truth_csv(const SynthResult& result, const std::string& path) {
  CsvWriter out(path);
  out.row({"id", "class"});
  for (NodeId v = 0; v < result.graph.n(); ++v)
    out.row({result.graph.key(v), synth_class_name(result.truth[static_cast<std::size_t>(v)])});
  out.close();
}

const char* synth_class_name(SynthClass c) {
  switch (c) {
    case SynthClass::Normal: return "normal";
    case SynthClass::Artefact: return "artefact";
    case SynthClass::Structural: return "structural";
  }
  return "normal";
}

}  // namespace disruptix
