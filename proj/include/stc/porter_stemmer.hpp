#pragma once

#include <string>
#include <string_view>

namespace stc {

/// Porter's 1980 suffix-stripping stemmer, applied to a lowercase word.
/// Words of two letters or fewer are returned unchanged.
///
/// This is the algorithm as originally published (ABLI -> ABLE in step 2, no
/// LOGI rule), not the later revisions of the reference implementation.
std::string porter_stem(std::string_view word);

}  // namespace stc
