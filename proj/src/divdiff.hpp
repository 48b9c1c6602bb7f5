#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "funcmodel.hpp"
#include "matcore.hpp"

namespace matmono {

/// Nodes closer than this (relative to max(1,|t|)) are treated as equal.
inline constexpr double kCoincidence = 1e-8;
/// Highest derivative order used for a repeated node.
inline constexpr int kMaxRepeatOrder = 5;

/// [t_0, ..., t_m]_f, invariant under permutation of the nodes.
///
/// Blocks of nodes spread over less than a few percent of their magnitude are
/// evaluated from the Taylor expansion at the block centre, where the
/// difference quotient would cancel; wider blocks use the recursive quotient.
double divided_difference(const FunctionSpec& f, std::span<const double> nodes);

enum class CriterionKind { Loewner, Kraus, LocalMonotone, LocalConvex };

const char* criterion_kind_name(CriterionKind kind);
CriterionKind parse_criterion_kind(const std::string& name);

struct CriterionMatrix {
  CriterionKind kind = CriterionKind::Loewner;
  Matrix entries;
  std::vector<double> nodes;
  std::optional<double> s;
};

/// ([t_i, t_j]_f); diagonal f'(t_i).
CriterionMatrix loewner_matrix(const FunctionSpec& f, std::span<const double> nodes);
/// ([t_i, t_j, s]_f).
CriterionMatrix kraus_matrix(const FunctionSpec& f, std::span<const double> nodes, double s);
/// local_convex: [[f''/2, f'''/6], [f'''/6, f''''/24]];
/// local_monotone: [[f', f''/2], [f''/2, f'''/6]].
CriterionMatrix local_criterion_matrix(const FunctionSpec& f, double t, CriterionKind kind);

}  // namespace matmono
