#pragma once

#include <stdexcept>
#include <string>

namespace twistforge {

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct not_a_unit : error { using error::error; };
struct odd_prime_required : error { using error::error; };
struct char2_required : error { using error::error; };
struct zero_twist : error { using error::error; };
struct singular_model : error { using error::error; };
struct not_minimal : error { using error::error; };
struct not_strongly_minimal : error { using error::error; };
struct no_match : error { using error::error; };
struct ambiguous_match : error { using error::error; };
struct table_mismatch : error { using error::error; };
struct internal_loop_bound : error { using error::error; };
struct unknown_polynomial : error { using error::error; };
struct parse_error : error { using error::error; };

}  // namespace twistforge
