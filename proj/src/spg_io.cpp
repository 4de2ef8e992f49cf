#include "speiser/spg_io.hpp"

#include <charconv>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

namespace speiser {

namespace {

class SpgReader {
 public:
  SpgReader(const std::string& text, std::string source) : source_(std::move(source)) {
    std::istringstream in(text);
    std::string line;
    int n = 0;
    while (std::getline(in, line)) {
      ++n;
      if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      std::istringstream ls(line);
      std::vector<std::string> tok;
      for (std::string t; ls >> t;) tok.push_back(t);
      if (!tok.empty()) lines_.push_back({n, std::move(tok)});
    }
  }

  SpeiserPatch read() {
    if (lines_.empty()) fail(1, "empty file");
    const auto& first = lines_.front();
    if (first.tok.size() != 2 || first.tok[0] != "spg" || first.tok[1] != "1") {
      fail(first.no, "expected header 'spg 1'");
    }
    SpeiserPatch p;
    std::optional<int> k;
    std::optional<std::vector<SphereValue>> labels;
    std::optional<std::vector<SphereValue>> base;
    bool have_root = false;
    for (size_t i = 1; i < lines_.size(); ++i) {
      const auto& [no, tok] = lines_[i];
      const std::string& kw = tok[0];
      if (kw == "k") {
        expect_count(no, tok, 2);
        k = static_cast<int>(integer(no, tok[1]));
      } else if (kw == "labels" || kw == "base") {
        std::vector<SphereValue> vals;
        for (size_t j = 1; j < tok.size(); ++j) {
          try {
            vals.push_back(parse_sphere_value(tok[j]));
          } catch (const DomainError& e) {
            fail(no, e.what());
          }
        }
        (kw == "labels" ? labels : base) = std::move(vals);
        if (kw == "base") base_line_ = no;
      } else if (kw == "root") {
        expect_count(no, tok, 2);
        p.root = integer(no, tok[1]);
        have_root = true;
      } else if (kw == "vertex") {
        if (tok.size() < 3) fail(no, "vertex line needs an id and a color");
        Vertex v;
        v.id = integer(no, tok[1]);
        if (tok[2] == "cross") {
          v.color = Color::Cross;
        } else if (tok[2] == "circle") {
          v.color = Color::Circle;
        } else {
          fail(no, "unknown color '" + tok[2] + "'");
        }
        size_t end = tok.size();
        if (tok.back() == "boundary") {
          v.boundary = true;
          --end;
        }
        for (size_t j = 3; j < end; ++j) v.rotation.push_back(integer(no, tok[j]));
        if (p.vertices.count(v.id)) fail(no, "duplicate vertex id " + tok[1]);
        vertex_line_[v.id] = no;
        p.vertices[v.id] = std::move(v);
      } else if (kw == "halfedge") {
        expect_count(no, tok, 6);
        if (tok[2] != "type" || tok[4] != "twin") fail(no, "expected 'halfedge <id> type <t> twin <id|dangling>'");
        HalfEdge he;
        he.id = integer(no, tok[1]);
        he.type = static_cast<int>(integer(no, tok[3]));
        if (tok[5] != "dangling") he.twin = integer(no, tok[5]);
        if (p.half_edges.count(he.id)) fail(no, "duplicate half-edge id " + tok[1]);
        halfedge_line_[he.id] = no;
        p.half_edges[he.id] = he;
      } else {
        fail(no, "unknown keyword '" + kw + "'");
      }
    }
    if (!k) fail(last_line(), "missing 'k' line");
    if (!labels) fail(last_line(), "missing 'labels' line");
    if (!base) fail(last_line(), "missing 'base' line");
    if (!have_root) fail(last_line(), "missing 'root' line");
    p.k = *k;
    if (static_cast<int>(labels->size()) != p.k) fail(base_line_, "labels line must list exactly k values");
    try {
      p.base = BaseCurve(*base);
    } catch (const DomainError& e) {
      fail(base_line_, e.what());
    }
    for (const auto& l : *labels) {
      if (p.base.index_of(l) < 0) fail(base_line_, "base order is not a permutation of the labels");
    }
    // The owning vertex of each half-edge comes from the rotation lists.
    for (auto& [vid, v] : p.vertices) {
      for (HalfEdgeId h : v.rotation) {
        auto it = p.half_edges.find(h);
        if (it == p.half_edges.end()) fail(vertex_line_[vid], "rotation lists unknown half-edge " + std::to_string(h));
        if (owner_.count(h)) fail(vertex_line_[vid], "half-edge " + std::to_string(h) + " listed twice");
        owner_[h] = vid;
        it->second.vertex = vid;
      }
    }
    for (const auto& [h, he] : p.half_edges) {
      if (!owner_.count(h)) fail(halfedge_line_[h], "half-edge not listed in any vertex rotation");
    }
    const auto report = validate(p);
    if (!report.empty()) {
      std::ostringstream os;
      for (const auto& v : report) {
        int line = 0;
        if (v.half_edge && halfedge_line_.count(*v.half_edge)) line = halfedge_line_[*v.half_edge];
        if (v.vertex && vertex_line_.count(*v.vertex)) line = vertex_line_[*v.vertex];
        os << source_ << ":" << line << ": " << v.rule << ": " << v.message << '\n';
      }
      throw DomainError("invalid SPG patch\n" + os.str());
    }
    return p;
  }

 private:
  struct Line {
    int no;
    std::vector<std::string> tok;
  };

  [[noreturn]] void fail(int line, const std::string& msg) const {
    throw DomainError(source_ + ":" + std::to_string(line) + ": " + msg);
  }

  void expect_count(int no, const std::vector<std::string>& tok, size_t n) const {
    if (tok.size() != n) fail(no, "'" + tok[0] + "' line expects " + std::to_string(n - 1) + " field(s)");
  }

  std::uint64_t integer(int no, const std::string& s) const {
    std::uint64_t x = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
    if (ec != std::errc() || ptr != s.data() + s.size()) fail(no, "expected a non-negative integer, got '" + s + "'");
    return x;
  }

  int last_line() const { return lines_.empty() ? 1 : lines_.back().no; }

  std::string source_;
  std::vector<Line> lines_;
  int base_line_ = 1;
  std::map<VertexId, int> vertex_line_;
  std::map<HalfEdgeId, int> halfedge_line_;
  std::map<HalfEdgeId, VertexId> owner_;
};

}  // namespace

SpeiserPatch parse_spg(const std::string& text, const std::string& source_name) {
  return SpgReader(text, source_name).read();
}

SpeiserPatch read_spg_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open SPG file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_spg(ss.str(), path);
}

std::string to_spg(const SpeiserPatch& p, const std::vector<std::string>& header_comments) {
  std::ostringstream os;
  os << "spg 1\n";
  for (const auto& c : header_comments) os << "# " << c << '\n';
  os << "k " << p.k << '\n';
  std::vector<SphereValue> sorted = p.base.entries();
  std::sort(sorted.begin(), sorted.end());
  os << "labels";
  for (const auto& v : sorted) os << ' ' << format_sphere_value(v);
  os << "\nbase";
  for (const auto& v : p.base.entries()) os << ' ' << format_sphere_value(v);
  os << "\nroot " << p.root << '\n';
  for (const auto& [id, v] : p.vertices) {
    os << "vertex " << id << ' ' << to_string(v.color);
    for (HalfEdgeId h : v.rotation) os << ' ' << h;
    if (v.boundary) os << " boundary";
    os << '\n';
  }
  for (const auto& [id, he] : p.half_edges) {
    os << "halfedge " << id << " type " << he.type << " twin ";
    if (he.twin) {
      os << *he.twin;
    } else {
      os << "dangling";
    }
    os << '\n';
  }
  return os.str();
}

void write_spg_file(const std::string& path, const SpeiserPatch& patch, const std::vector<std::string>& header) {
  std::ofstream out(path);
  if (!out) throw DomainError("cannot write '" + path + "'");
  out << to_spg(patch, header);
}

std::string to_dot(const SpeiserPatch& p) {
  std::ostringstream os;
  os << "graph speiser {\n";
  for (const Face& f : faces(p)) {
    os << "  // face " << format_sphere_value(f.label) << (f.closed ? " closed" : " open") << " length "
       << f.corners.size() << '\n';
  }
  for (const auto& [id, v] : p.vertices) {
    os << "  v" << id << " [shape=" << (v.color == Color::Cross ? "box" : "circle");
    if (v.boundary) os << ", style=dashed";
    if (id == p.root) os << ", penwidth=2";
    os << "];\n";
  }
  for (const auto& [id, he] : p.half_edges) {
    if (!he.twin || *he.twin < id) continue;
    os << "  v" << he.vertex << " -- v" << p.half_edge(*he.twin).vertex << " [label=" << he.type << "];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace speiser
