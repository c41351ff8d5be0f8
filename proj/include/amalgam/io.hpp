#ifndef AMALGAM_IO_HPP
#define AMALGAM_IO_HPP

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "amalgam/algebra_amalgam.hpp"
#include "amalgam/fock.hpp"
#include "amalgam/star_algebra.hpp"
#include "amalgam/triangle.hpp"

namespace amalgam::io {

using json = nlohmann::json;

/// Reads JSON documents; string references to other documents are resolved
/// relative to the referring file.  Every file read is recorded with its digest.
class Loader {
public:
  json load(const std::filesystem::path& path);

  GroupPtr group(const json& doc, const std::filesystem::path& dir);
  GroupMorphism morphism(const json& doc, const GroupPtr& domain, const GroupPtr& codomain);
  GroupTriangle group_triangle(const json& doc, const std::filesystem::path& dir);

  AlgebraPtr algebra(const json& doc, const std::filesystem::path& dir);
  AlgebraTriangle algebra_triangle(const json& doc, const std::filesystem::path& dir,
                                   std::vector<int>* family_order = nullptr);

  /// File path -> "sha256:<hex>".
  const std::map<std::string, std::string>& digests() const { return digests_; }

private:
  json resolve(const json& doc, std::filesystem::path& dir);
  std::map<std::string, std::string> digests_;
};

Scalar parse_scalar(const json& j);
Vec parse_vector(const json& j);
linalg::Mat parse_matrix(const json& j);
json scalar_json(const Scalar& s);
json vector_json(const Vec& v);

std::string sha256_hex(const std::string& bytes);

/// Embedding of M_n into M_N: a -> w (a (x) I) w* ("left") or w (I (x) a) w* ("right").
linalg::Mat tensor_embedding(const StarAlgebra& big, const StarAlgebra& small, const linalg::Mat& w, bool left);

struct FockRequest {
  std::vector<PointedAlgebra> factors;
  int depth = 2;
  std::vector<FockWord> words;
};
FockRequest fock_request(Loader& loader, const json& doc, const std::filesystem::path& dir);
/// "f:k,f:k,...": 1-based factor, basis label or index; an empty string is the empty word.
FockWord parse_word(const std::string& text, const std::vector<PointedAlgebra>& factors);

struct SquareRequest {
  AlgebraPtr algebra;
  ConditionalExpectation first;
  ConditionalExpectation second;
};
SquareRequest square_request(Loader& loader, const json& doc, const std::filesystem::path& dir);

}  // namespace amalgam::io

#endif  // AMALGAM_IO_HPP
