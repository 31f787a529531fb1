#pragma once

#include <string>
#include <vector>

#include "kpref/embedding.hpp"
#include "kpref/mahalanobis.hpp"
#include "kpref/solver_preference.hpp"
#include "kpref/solver_triplet.hpp"
#include "kpref/types.hpp"

namespace kpref {

/// Which problem a stored model solves.
enum class TaskKind { Preference, Triplet };

/// A model read back from disk. The coordinate basis is rebuilt from the
/// stored base items and kernel; since that construction is deterministic
/// and the JSON encoder round-trips doubles exactly, a loaded model
/// reproduces the writer's predictions bit for bit.
struct LoadedModel {
  TaskKind task = TaskKind::Preference;
  std::vector<std::string> item_ids;  ///< ids of the base items, in order
  GramBasis basis;
  MahalanobisForm form;   ///< learned bilinear form on coordinates
  Vector ideal;           ///< ideal point; empty for triplet models
  double lambda = 0.0;    ///< ideal-point regularizer weight (preference)
  double trace_weight = 0.0;  ///< scale regularizer weight (triplet)
  Matrix kernel_coeffs_a;     ///< form against raw kernel functions
  Vector kernel_coeffs_b;     ///< ideal against raw kernel functions; empty
                              ///< for triplet models
  double objective_trace_last = 0.0;
  double zero_one_train_error = 0.0;
};

/// Writes a trained preference model as JSON. Every field except the
/// `created_at` timestamp is a pure function of the model, so identical
/// training runs produce byte-identical files once that one field is
/// dropped. `item_ids` must have one id per base item. Throws InputError
/// if the file cannot be written or the ids do not match the basis.
void save_model(const PreferenceModel& model,
                const std::vector<std::string>& item_ids,
                const std::string& path);

/// Triplet counterpart of save_model.
void save_model(const TripletModel& model,
                const std::vector<std::string>& item_ids,
                const std::string& path);

/// Reads a model written by save_model. Throws InputError on unreadable,
/// malformed, or internally inconsistent files.
LoadedModel load_model(const std::string& path);

}  // namespace kpref
