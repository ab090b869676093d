#pragma once

#include <stdexcept>
#include <string>

namespace w2w {

// Failure reading or writing a file. what() names the path.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A file that does not follow its declared format (bad header, bad field,
// rank gaps, truncated records).
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Lookup of a word that is not in the relevant vocabulary.
class NotFoundError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Inputs that are well-formed but unusable: empty corpus, empty gold
// dictionary, no eligible words for sampling, invalid parameters.
class InvalidInput : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace w2w
