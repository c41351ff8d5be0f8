#include "amalgam/io.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "amalgam/errors.hpp"

namespace amalgam::io {

namespace fs = std::filesystem;
using linalg::Mat;

namespace {

[[noreturn]] void bad(const std::string& msg) { throw Error("ParseError", msg); }

const json& field(const json& doc, const char* key) {
  if (!doc.is_object() || !doc.contains(key)) bad(std::string("missing field '") + key + "'");
  return doc.at(key);
}

int as_int(const json& j, const std::string& what) {
  if (!j.is_number_integer()) bad(what + " must be an integer");
  return j.get<int>();
}

std::vector<int> int_list(const json& j, const std::string& what) {
  if (!j.is_array()) bad(what + " must be a list");
  std::vector<int> out;
  for (const auto& x : j) out.push_back(as_int(x, what));
  return out;
}

const char* kEdgeNames[3] = {"12", "13", "23"};

int edge_by_name(const std::string& s) {
  for (int e = 0; e < 3; ++e)
    if (s == kEdgeNames[e] || s == std::string{kEdgeNames[e][1], kEdgeNames[e][0]}) return e;
  bad("unknown edge '" + s + "'");
}

Mat unit_column(const StarAlgebra& a) {
  Mat m(a.dim, 1);
  m.set_col(0, a.unit);
  return m;
}

}  // namespace

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr);
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return os.str();
}

Scalar parse_scalar(const json& j) {
  if (j.is_number_integer()) return Scalar(j.get<long>());
  if (j.is_string()) return Scalar::parse(j.get<std::string>());
  if (j.is_array() && j.size() == 2) {
    const Scalar re = parse_scalar(j[0]), im = parse_scalar(j[1]);
    if (!re.is_real() || !im.is_real()) bad("complex pair with complex parts");
    return re + im * Scalar::i();
  }
  bad("scalar must be an integer, a \"p/q\" string or a [re, im] pair");
}

Vec parse_vector(const json& j) {
  if (!j.is_array()) bad("vector must be a list");
  Vec v;
  for (const auto& x : j) v.push_back(parse_scalar(x));
  return v;
}

Mat parse_matrix(const json& j) {
  if (!j.is_array() || j.empty()) bad("matrix must be a non-empty list of rows");
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  Mat m(j.size(), cols);
  for (std::size_t r = 0; r < j.size(); ++r) {
    const Vec row = parse_vector(j[r]);
    if (row.size() != cols) bad("ragged matrix");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = row[c];
  }
  return m;
}

json scalar_json(const Scalar& s) { return s.str(); }

json vector_json(const Vec& v) {
  json out = json::array();
  for (const auto& s : v) out.push_back(s.str());
  return out;
}

Mat tensor_embedding(const StarAlgebra& big, const StarAlgebra& small, const Mat& w, bool left) {
  require(big.has_matrix_structure() && small.has_matrix_structure(), "BadEmbedding",
          "tensor shorthand needs matrix algebras");
  const int N = big.matrix_size(), n = small.matrix_size();
  require(n > 0 && N % n == 0, "BadEmbedding", "matrix sizes do not divide");
  require(w.rows() == static_cast<std::size_t>(N) && w.cols() == static_cast<std::size_t>(N), "BadEmbedding",
          "conjugating matrix has the wrong size");
  const Mat id = Mat::identity(static_cast<std::size_t>(N / n));
  Mat m(big.dim, small.dim);
  for (int k = 0; k < small.dim; ++k) {
    const Mat a = small.to_matrix(small.basis(k));
    const Mat x = left ? linalg::kron(a, id) : linalg::kron(id, a);
    m.set_col(k, big.from_matrix(w * x * w.adjoint()));
  }
  return m;
}

json Loader::load(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("ParseError", "cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string bytes = ss.str();
  digests_[path.lexically_normal().string()] = "sha256:" + sha256_hex(bytes);
  try {
    return json::parse(bytes);
  } catch (const json::parse_error& e) {
    throw Error("ParseError", path.string() + ": " + e.what());
  }
}

json Loader::resolve(const json& doc, fs::path& dir) {
  if (!doc.is_string()) return doc;
  const fs::path p = dir / doc.get<std::string>();
  dir = p.parent_path();
  return load(p);
}

GroupPtr Loader::group(const json& in, const fs::path& base_dir) {
  fs::path dir = base_dir;
  const json doc = resolve(in, dir);
  if (!doc.is_object()) bad("group document must be an object");
  std::vector<std::string> labels;
  if (doc.contains("labels")) labels = doc.at("labels").get<std::vector<std::string>>();
  if (doc.contains("mul")) {
    const json& mj = doc.at("mul");
    Table t;
    for (const auto& row : mj) t.push_back(int_list(row, "table row"));
    if (doc.contains("order") && as_int(doc.at("order"), "order") != static_cast<int>(t.size()))
      bad("order differs from the table size");
    return make_group(FiniteGroup::from_table(t, labels));
  }
  if (doc.contains("permutation_generators")) {
    std::vector<std::vector<int>> gens;
    for (const auto& g : doc.at("permutation_generators")) gens.push_back(int_list(g, "permutation"));
    return make_group(FiniteGroup::from_permutations(gens));
  }
  if (doc.contains("cyclic")) return make_group(FiniteGroup::cyclic(as_int(doc.at("cyclic"), "cyclic")));
  if (doc.contains("symmetric")) return make_group(FiniteGroup::symmetric(as_int(doc.at("symmetric"), "symmetric")));
  if (doc.contains("dihedral")) return make_group(FiniteGroup::dihedral(as_int(doc.at("dihedral"), "dihedral")));
  if (doc.contains("trivial")) return make_group(FiniteGroup::trivial());
  if (doc.contains("direct_product")) {
    const json& f = doc.at("direct_product");
    if (!f.is_array() || f.size() < 2) bad("direct_product needs at least two factors");
    FiniteGroup g = *group(f[0], dir);
    for (std::size_t k = 1; k < f.size(); ++k) g = FiniteGroup::direct_product(g, *group(f[k], dir));
    return make_group(std::move(g));
  }
  bad("group document needs mul, permutation_generators, cyclic, symmetric, dihedral, trivial or direct_product");
}

namespace {

int element_of(const FiniteGroup& g, const json& x) {
  if (x.is_string()) {
    const int k = g.find_label(x.get<std::string>());
    if (k < 0) bad("unknown element label '" + x.get<std::string>() + "'");
    return k;
  }
  const int k = as_int(x, "element");
  if (k < 0 || k >= g.order()) bad("element index out of range");
  return k;
}

// extends generator images along right multiplication
GroupMorphism from_generators(const json& pairs, const GroupPtr& domain, const GroupPtr& codomain) {
  std::vector<std::pair<int, int>> gens;
  for (const auto& p : pairs) {
    if (!p.is_array() || p.size() != 2) bad("generator images are [element, image] pairs");
    gens.emplace_back(element_of(*domain, p[0]), element_of(*codomain, p[1]));
  }
  GroupMorphism f{domain, codomain, std::vector<int>(static_cast<std::size_t>(domain->order()), -1)};
  f.map[domain->identity()] = codomain->identity();
  std::vector<int> queue{domain->identity()};
  for (std::size_t q = 0; q < queue.size(); ++q) {
    const int g = queue[q];
    for (const auto& [s, t] : gens) {
      const int gs = domain->mul(g, s), img = codomain->mul(f.map[g], t);
      if (f.map[gs] < 0) {
        f.map[gs] = img;
        queue.push_back(gs);
      } else if (f.map[gs] != img) {
        throw Error("NotHomomorphism", "generator images do not extend to a homomorphism");
      }
    }
  }
  if (static_cast<int>(queue.size()) != domain->order()) bad("listed elements do not generate the domain");
  return f;
}

}  // namespace

GroupMorphism Loader::morphism(const json& doc, const GroupPtr& domain, const GroupPtr& codomain) {
  if (doc.is_object() && doc.contains("generators")) {
    GroupMorphism f = from_generators(doc.at("generators"), domain, codomain);
    require_morphism(f);
    return f;
  }
  const json& mj = doc.is_object() ? field(doc, "map") : doc;
  GroupMorphism f{domain, codomain, {}};
  if (!mj.is_array()) bad("morphism map must be a list");
  for (const auto& x : mj) f.map.push_back(element_of(*codomain, x));
  if (static_cast<int>(f.map.size()) != domain->order()) bad("morphism map length differs from the domain order");
  require_morphism(f);
  return f;
}

GroupTriangle Loader::group_triangle(const json& in, const fs::path& base_dir) {
  fs::path dir = base_dir;
  const json doc = resolve(in, dir);
  GroupTriangle t;
  const json& vs = field(doc, "vertices");
  if (!vs.is_array() || vs.size() != 3) bad("a triangle has three vertices");
  for (const auto& v : vs) t.family.vertices.push_back(group(v, dir));
  const json& es = field(doc, "edges");
  t.family.edges.resize(3);
  for (int e = 0; e < 3; ++e) {
    const json* ej = nullptr;
    if (es.is_object()) {
      for (auto it = es.begin(); it != es.end(); ++it)
        if (edge_by_name(it.key()) == e) ej = &it.value();
    } else if (es.is_array() && es.size() == 3) {
      ej = &es[static_cast<std::size_t>(e)];
    }
    if (!ej) bad(std::string("missing edge ") + kEdgeNames[e]);
    Edge& ed = t.family.edges[e];
    ed.a = GroupTriangle::kEdgeEnds[e][0];
    ed.b = GroupTriangle::kEdgeEnds[e][1];
    ed.group = group(field(*ej, "group"), dir);
    ed.into_a = morphism(field(*ej, "into_a"), ed.group, t.family.vertices[ed.a]);
    ed.into_b = morphism(field(*ej, "into_b"), ed.group, t.family.vertices[ed.b]);
  }
  if (doc.contains("core")) {
    const json& cj = doc.at("core");
    t.core = group(field(cj, "group"), dir);
    const json& into = field(cj, "into");
    for (int e = 0; e < 3; ++e) t.core_into[e] = morphism(field(into, kEdgeNames[e]), t.core, t.family.edges[e].group);
  } else {
    t.core = make_group(FiniteGroup::trivial());
    for (int e = 0; e < 3; ++e) {
      const auto& g = t.family.edges[e].group;
      t.core_into[e] = GroupMorphism{t.core, g, {g->identity()}};
    }
  }
  t.validate();
  return t;
}

AlgebraPtr Loader::algebra(const json& in, const fs::path& base_dir) {
  fs::path dir = base_dir;
  const json doc = resolve(in, dir);
  if (!doc.is_object()) bad("algebra document must be an object");
  if (doc.contains("scalars")) return make_algebra(scalars());
  if (doc.contains("matrix")) return make_algebra(matrix_algebra(as_int(doc.at("matrix"), "matrix size")));
  if (doc.contains("group")) return make_algebra(group_star_algebra(*group(doc.at("group"), dir)));
  if (doc.contains("tensor") || doc.contains("direct_sum")) {
    const bool tens = doc.contains("tensor");
    const json& f = doc.at(tens ? "tensor" : "direct_sum");
    if (!f.is_array() || f.size() < 2) bad("need at least two factors");
    StarAlgebra a = *algebra(f[0], dir);
    for (std::size_t k = 1; k < f.size(); ++k) a = tens ? tensor(a, *algebra(f[k], dir)) : direct_sum(a, *algebra(f[k], dir));
    return make_algebra(std::move(a));
  }
  const int dim = as_int(field(doc, "dim"), "dim");
  if (dim < 1) bad("dim must be positive");
  const auto D = static_cast<std::size_t>(dim);
  std::vector<std::string> labels;
  if (doc.contains("labels")) labels = doc.at("labels").get<std::vector<std::string>>();
  auto index = [&](const json& x) {
    if (x.is_string()) {
      for (std::size_t k = 0; k < labels.size(); ++k)
        if (labels[k] == x.get<std::string>()) return static_cast<int>(k);
      bad("unknown basis label '" + x.get<std::string>() + "'");
    }
    const int k = as_int(x, "basis index");
    if (k < 0 || k >= dim) bad("basis index out of range");
    return k;
  };
  // entries [i, j, k, coeff]: b_i b_j has coefficient coeff on b_k
  std::vector<Vec> dense(D * D, Vec(D));
  for (const auto& e : field(doc, "structure")) {
    if (!e.is_array() || e.size() != 4) bad("structure entries are [i, j, k, coeff]");
    dense[static_cast<std::size_t>(index(e[0])) * D + index(e[1])][index(e[2])] += parse_scalar(e[3]);
  }
  SparseTable table;
  for (const auto& v : dense) table.push_back(to_sparse(v));
  std::vector<Vec> star_dense(D, Vec(D));
  for (const auto& e : field(doc, "star")) {
    if (!e.is_array() || e.size() != 3) bad("star entries are [i, k, coeff]");
    star_dense[index(e[0])][index(e[1])] += parse_scalar(e[2]);
  }
  std::vector<SparseVec> star;
  for (const auto& v : star_dense) star.push_back(to_sparse(v));
  const Vec unit = parse_vector(field(doc, "unit"));
  if (unit.size() != D) bad("unit has the wrong length");
  std::optional<Vec> trace;
  if (doc.contains("trace")) {
    trace = parse_vector(doc.at("trace"));
    if (trace->size() != D) bad("trace has the wrong length");
  }
  return make_algebra(algebra_from_structure(dim, labels, std::move(table), unit, std::move(star), trace));
}

namespace {

Mat embedding_from(const json& j, const StarAlgebra& to, const StarAlgebra& from) {
  if (j.is_object() && j.contains("shorthand")) {
    const std::string side = j.at("shorthand").get<std::string>();
    if (side != "left" && side != "right") bad("shorthand must be left or right");
    const Mat w = j.contains("conjugate") ? parse_matrix(j.at("conjugate"))
                                          : Mat::identity(static_cast<std::size_t>(to.matrix_size()));
    return tensor_embedding(to, from, w, side == "left");
  }
  const Mat m = parse_matrix(j.is_object() ? field(j, "matrix") : j);
  if (m.rows() != static_cast<std::size_t>(to.dim) || m.cols() != static_cast<std::size_t>(from.dim))
    bad("embedding matrix has the wrong shape");
  return m;
}

}  // namespace

AlgebraTriangle Loader::algebra_triangle(const json& in, const fs::path& base_dir, std::vector<int>* family_order) {
  fs::path dir = base_dir;
  const json doc = resolve(in, dir);
  AlgebraTriangle t;
  const json& vs = field(doc, "vertices");
  if (!vs.is_array() || vs.size() != 3) bad("a triangle has three vertices");
  for (int v = 0; v < 3; ++v) t.vertices[v] = algebra(vs[static_cast<std::size_t>(v)], dir);
  const json& es = field(doc, "edges");
  for (int e = 0; e < 3; ++e) {
    const json& ej = field(es, kEdgeNames[e]);
    AlgebraEdge& ed = t.edges[e];
    ed.a = GroupTriangle::kEdgeEnds[e][0];
    ed.b = GroupTriangle::kEdgeEnds[e][1];
    ed.algebra = algebra(field(ej, "algebra"), dir);
    const json& ja = ej.contains("into") ? ej.at("into") : field(ej, "into_a");
    const json& jb = ej.contains("into") ? ej.at("into") : field(ej, "into_b");
    ed.into_a = embedding_from(ja, *t.vertices[ed.a], *ed.algebra);
    ed.into_b = embedding_from(jb, *t.vertices[ed.b], *ed.algebra);
  }
  if (doc.contains("core")) {
    const json& cj = doc.at("core");
    t.core = algebra(field(cj, "algebra"), dir);
    for (int e = 0; e < 3; ++e) {
      if (t.core->dim == 1 && !(cj.contains("into") && cj.at("into").contains(kEdgeNames[e])))
        t.core_into[e] = unit_column(*t.edges[e].algebra);
      else
        t.core_into[e] = embedding_from(field(field(cj, "into"), kEdgeNames[e]), *t.edges[e].algebra, *t.core);
    }
  } else {
    t.core = make_algebra(scalars());
    for (int e = 0; e < 3; ++e) t.core_into[e] = unit_column(*t.edges[e].algebra);
  }
  if (family_order) {
    family_order->clear();
    if (doc.contains("family_order")) {
      for (const auto& x : doc.at("family_order")) family_order->push_back(edge_by_name(x.get<std::string>()));
    } else {
      *family_order = {0, 1, 2};
    }
    std::vector<int> sorted = *family_order;
    std::sort(sorted.begin(), sorted.end());
    if (sorted != std::vector<int>{0, 1, 2}) bad("family_order must list each edge once");
  }
  t.validate();
  return t;
}

namespace {

int basis_index(const StarAlgebra& a, const std::string& s) {
  for (int k = 0; k < a.dim; ++k)
    if (a.labels[k] == s) return k;
  try {
    std::size_t used = 0;
    const int k = std::stoi(s, &used);
    if (used == s.size() && k >= 0 && k < a.dim) return k;
  } catch (const std::exception&) {
  }
  bad("unknown basis element '" + s + "'");
}

}  // namespace

FockWord parse_word(const std::string& text, const std::vector<PointedAlgebra>& factors) {
  FockWord w;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto colon = item.find(':');
    if (colon == std::string::npos) bad("word letters are factor:element");
    int f = 0;
    try {
      f = std::stoi(item.substr(0, colon)) - 1;
    } catch (const std::exception&) {
      bad("bad factor in '" + item + "'");
    }
    if (f < 0 || f >= static_cast<int>(factors.size())) throw Error("FactorIndexBad", "no factor in '" + item + "'");
    const StarAlgebra& a = *factors[f].algebra;
    w.push_back({f, a.basis(basis_index(a, item.substr(colon + 1)))});
  }
  return w;
}

FockRequest fock_request(Loader& loader, const json& doc, const fs::path& dir) {
  FockRequest req;
  const AlgebraPtr base = doc.contains("base") ? loader.algebra(doc.at("base"), dir) : scalar_base();
  const json& fs_ = field(doc, "factors");
  if (!fs_.is_array() || fs_.empty()) bad("factors must be a non-empty list");
  for (const auto& fj : fs_) {
    const AlgebraPtr a = loader.algebra(fj.is_object() && fj.contains("algebra") ? fj.at("algebra") : fj, dir);
    if (fj.is_object() && fj.contains("expect")) {
      PointedAlgebra p{a, base, parse_matrix(field(fj, "embed")), parse_matrix(fj.at("expect"))};
      require_pointed(p);
      req.factors.push_back(std::move(p));
    } else {
      require(base->dim == 1, "ParseError", "factors over a non-scalar base need embed and expect matrices");
      req.factors.push_back(over_scalars(a));
    }
  }
  if (doc.contains("depth")) req.depth = as_int(doc.at("depth"), "depth");
  if (doc.contains("words"))
    for (const auto& w : doc.at("words")) req.words.push_back(parse_word(w.get<std::string>(), req.factors));
  return req;
}

SquareRequest square_request(Loader& loader, const json& doc, const fs::path& dir) {
  SquareRequest req;
  const json& aj = field(doc, "algebra");
  req.algebra = loader.algebra(aj, dir);
  auto expectation = [&](const json& e) -> ConditionalExpectation {
    if (e.contains("trace")) {
      const std::string side = e.at("trace").get<std::string>();
      if (side != "left" && side != "right") bad("trace side must be left or right");
      ConditionalExpectation ce = trace_expectation(req.algebra, side == "left" ? TensorSide::Left : TensorSide::Right);
      if (e.contains("conjugate")) ce = conjugate_expectation(ce, req.algebra->from_matrix(parse_matrix(e.at("conjugate"))));
      return ce;
    }
    if (e.contains("subgroup")) {
      fs::path d = dir;
      if (!aj.is_object() || !aj.contains("group")) bad("subgroup expectation needs a group algebra");
      const GroupPtr g = loader.group(aj.at("group"), d);
      return subgroup_expectation(req.algebra, subgroup_generated(g, int_list(e.at("subgroup"), "subgroup")));
    }
    if (e.contains("scalar")) return scalar_expectation(req.algebra);
    bad("expectation needs trace, subgroup or scalar");
  };
  req.first = expectation(field(doc, "first"));
  req.second = expectation(field(doc, "second"));
  require_expectation(req.first);
  require_expectation(req.second);
  return req;
}

}  // namespace amalgam::io
