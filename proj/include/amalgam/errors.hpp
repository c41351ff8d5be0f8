#ifndef AMALGAM_ERRORS_HPP
#define AMALGAM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace amalgam {

// Every failure carries a stable kind tag (the names used in reports) and a
// human-readable message that includes the witness.
class Error : public std::runtime_error {
public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

private:
  std::string kind_;
};

inline void require(bool cond, const char* kind, const std::string& msg) {
  if (!cond) throw Error(kind, msg);
}

}  // namespace amalgam

#endif  // AMALGAM_ERRORS_HPP
