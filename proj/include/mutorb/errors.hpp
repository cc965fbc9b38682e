#pragma once

#include <stdexcept>
#include <string>

namespace mutorb {

// Domain errors. Each maps to one failure mode of the public API; the CLI
// turns any of these into exit code 1.
struct domain_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct invalid_matrix : domain_error {
  using domain_error::domain_error;
};
struct not_symmetrizable : domain_error {
  using domain_error::domain_error;
};
struct not_realizable : domain_error {
  using domain_error::domain_error;
};
struct non_laurent_division : domain_error {
  using domain_error::domain_error;
};
struct search_budget_exceeded : domain_error {
  using domain_error::domain_error;
};
struct invalid_matching : domain_error {
  using domain_error::domain_error;
};
struct not_flippable : domain_error {
  using domain_error::domain_error;
};
struct boundary_arc : domain_error {
  using domain_error::domain_error;
};
struct untriangulated_input : domain_error {
  using domain_error::domain_error;
};
struct non_orientable_gluing : domain_error {
  using domain_error::domain_error;
};
struct shape_mismatch : domain_error {
  using domain_error::domain_error;
};
struct non_commuting_block : domain_error {
  using domain_error::domain_error;
};
struct not_applicable : domain_error {
  using domain_error::domain_error;
};
struct not_s_decomposable : domain_error {
  using domain_error::domain_error;
};
struct excluded_family : domain_error {
  using domain_error::domain_error;
};
struct wrong_normal_form : domain_error {
  using domain_error::domain_error;
};
struct class_enumeration_exceeded : domain_error {
  using domain_error::domain_error;
};

} // namespace mutorb
