#include "corrtrans/render/scene_parser.hpp"

#include <array>
#include <cmath>
#include <optional>
#include <vector>

#include "corrtrans/model_spec.hpp"

namespace corrtrans::render {

namespace {

struct Token {
  enum class Kind { Word, Open, Close, Newline, End };
  Kind kind = Kind::End;
  std::string text;
  std::size_t line = 1;
  std::size_t column = 1;
};

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t line = 1;
  std::size_t col = 1;
  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (c == '\n') {
      out.push_back({Token::Kind::Newline, "\\n", line, col});
      ++line;
      col = 1;
      ++i;
    } else if (c == ' ' || c == '\t' || c == '\r') {
      ++col;
      ++i;
    } else if (c == '#') {
      while (i < s.size() && s[i] != '\n') ++i;
    } else if (c == '{' || c == '}') {
      out.push_back({c == '{' ? Token::Kind::Open : Token::Kind::Close, std::string(1, c), line, col});
      ++col;
      ++i;
    } else {
      const std::size_t start = i;
      const std::size_t start_col = col;
      while (i < s.size() && s[i] != ' ' && s[i] != '\t' && s[i] != '\r' && s[i] != '\n' && s[i] != '{' &&
             s[i] != '}' && s[i] != '#') {
        ++i;
        ++col;
      }
      out.push_back({Token::Kind::Word, std::string(s.substr(start, i - start)), line, start_col});
    }
  }
  out.push_back({Token::Kind::End, "end of input", line, col});
  return out;
}

class Parser {
public:
  explicit Parser(std::string_view text) : toks_(tokenize(text)) {}

  Scene parse() {
    for (;;) {
      skip_newlines();
      const Token& t = peek();
      if (t.kind == Token::Kind::End) break;
      const Token head = expect_word("a statement");
      if (head.text == "background") {
        scene_.background = rgb();
        end_statement();
      } else if (head.text == "camera") {
        camera();
      } else if (head.text == "medium") {
        medium();
      } else if (head.text == "sphere" || head.text == "box" || head.text == "plane") {
        primitive(head);
      } else if (head.text == "light") {
        light();
      } else if (head.text == "interface") {
        interface_block();
      } else {
        fail("unknown statement '" + head.text + "'", head);
      }
    }
    resolve_light_models();
    try {
      scene_.validate();
    } catch (const std::domain_error& e) {
      fail(e.what(), toks_.back());
    }
    return std::move(scene_);
  }

private:
  struct PendingLight {
    std::size_t medium;
    Token name;
    ChannelModels models;
  };

  [[noreturn]] static void fail(const std::string& msg, const Token& at) { throw SceneParseError(msg, at.line, at.column); }

  const Token& peek() const { return toks_[pos_]; }
  Token next() {
    Token t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }
  void skip_newlines() {
    while (peek().kind == Token::Kind::Newline) next();
  }
  Token expect_word(const std::string& what) {
    const Token t = next();
    if (t.kind != Token::Kind::Word) fail("expected " + what + ", found '" + t.text + "'", t);
    return t;
  }
  void expect_open() {
    const Token t = next();
    if (t.kind != Token::Kind::Open) fail("expected '{', found '" + t.text + "'", t);
  }
  void end_statement() {
    const Token& t = peek();
    if (t.kind == Token::Kind::Newline) {
      next();
    } else if (t.kind != Token::Kind::Close && t.kind != Token::Kind::End) {
      fail("unexpected '" + t.text + "' at end of statement", t);
    }
  }
  // Next key inside a block, or nullopt at the closing brace.
  std::optional<Token> block_key() {
    skip_newlines();
    const Token& t = peek();
    if (t.kind == Token::Kind::Close) {
      next();
      return std::nullopt;
    }
    if (t.kind == Token::Kind::End) fail("missing '}'", t);
    return expect_word("a key");
  }
  bool at_statement_end() const {
    const auto k = peek().kind;
    return k == Token::Kind::Newline || k == Token::Kind::Close || k == Token::Kind::End;
  }

  double number() {
    const Token t = expect_word("a number");
    try {
      return parse_double(t.text);
    } catch (const std::exception&) {
      fail("invalid number '" + t.text + "'", t);
    }
  }
  Vec3 vec3() {
    Vec3 v;
    for (int a = 0; a < 3; ++a) v[a] = number();
    return v;
  }
  Rgb rgb() {
    Rgb c;
    for (int a = 0; a < 3; ++a) c[a] = number();
    return c;
  }
  std::size_t count() {
    const Token t = expect_word("a positive integer");
    double v = 0.0;
    try {
      v = parse_double(t.text);
    } catch (const std::exception&) {
      fail("invalid integer '" + t.text + "'", t);
    }
    if (!(v >= 1.0) || v != std::floor(v) || v > 1e6) fail("expected a positive integer, found '" + t.text + "'", t);
    return static_cast<std::size_t>(v);
  }
  ExtinctionModel model() {
    const Token t = expect_word("a model specification");
    try {
      return parse_model_spec(t.text);
    } catch (const std::exception& e) {
      fail(std::string("invalid model: ") + e.what(), t);
    }
  }
  ChannelModels models_rgb() {
    std::array<ExtinctionModel, 3> m{model(), model(), model()};
    return ChannelModels(m);
  }

  void camera() {
    expect_open();
    Camera& c = scene_.camera;
    while (auto key = block_key()) {
      if (key->text == "position") {
        c.position = vec3();
      } else if (key->text == "look_at") {
        c.look_at = vec3();
      } else if (key->text == "up") {
        c.up = vec3();
      } else if (key->text == "fov") {
        const Token at = peek();
        c.fov = number();
        if (!(c.fov > 0.0 && c.fov < 180.0)) fail("fov must lie in (0, 180)", at);
      } else if (key->text == "resolution") {
        c.width = count();
        c.height = count();
      } else {
        fail("unknown camera key '" + key->text + "'", *key);
      }
      end_statement();
    }
    if (!(length(c.look_at - c.position) > 0.0)) fail("camera look_at equals position", toks_[pos_ - 1]);
    if (!(length(cross(c.up, c.look_at - c.position)) > 0.0)) fail("camera up is parallel to the view direction", toks_[pos_ - 1]);
  }

  void medium() {
    const Token name = expect_word("a medium name");
    if (scene_.find_medium(name.text) >= 0) fail("duplicate medium '" + name.text + "'", name);
    expect_open();
    CorrelatedMedium m;
    m.name = name.text;
    bool has_source = false;
    const std::size_t index = scene_.media.size();
    while (auto key = block_key()) {
      if (key->text == "model") {
        m.scattered = ChannelModels(model());
      } else if (key->text == "model_rgb") {
        m.scattered = models_rgb();
      } else if (key->text == "source") {
        m.source = ChannelModels(model());
        has_source = true;
      } else if (key->text == "source_rgb") {
        m.source = models_rgb();
        has_source = true;
      } else if (key->text == "light") {
        const Token light = expect_word("a light name");
        pending_lights_.push_back({index, light, ChannelModels(model())});
      } else if (key->text == "albedo") {
        const double a = number();
        if (at_statement_end()) {
          m.albedo = Rgb(a);
        } else {
          const double g = number();
          m.albedo = Rgb(a, g, number());
        }
      } else if (key->text == "phase") {
        const Token kind = expect_word("isotropic or hg");
        if (kind.text == "isotropic") {
          m.phase = PhaseDescriptor::isotropic();
        } else if (kind.text == "hg") {
          const Token at = peek();
          try {
            m.phase = PhaseDescriptor::henyey_greenstein(number());
          } catch (const std::domain_error& e) {
            fail(e.what(), at);
          }
        } else {
          fail("unknown phase function '" + kind.text + "'", kind);
        }
      } else if (key->text == "ellipsoid") {
        const Token at = peek();
        std::array<double, 6> v{};
        for (int i = 0; i < 3; ++i) v[static_cast<std::size_t>(i)] = number();
        if (!at_statement_end()) {
          for (int i = 3; i < 6; ++i) v[static_cast<std::size_t>(i)] = number();
        }
        const DirectionalVariance::Matrix mat{{{v[0], v[3], v[4]}, {v[3], v[1], v[5]}, {v[4], v[5], v[2]}}};
        try {
          m.ellipsoid = DirectionalVariance(mat);
        } catch (const std::domain_error& e) {
          fail(e.what(), at);
        }
      } else {
        fail("unknown medium key '" + key->text + "'", *key);
      }
      end_statement();
    }
    if (!has_source) m.source = m.scattered;
    try {
      m.validate();
    } catch (const std::domain_error& e) {
      fail(e.what(), name);
    }
    scene_.media.push_back(std::move(m));
  }

  Material material() {
    const Token kind = expect_word("a material");
    Material mat;
    if (kind.text == "none") {
      mat.kind = Material::Kind::None;
    } else if (kind.text == "lambert") {
      mat.kind = Material::Kind::Lambertian;
      const Token at = peek();
      mat.albedo = rgb();
      for (int c = 0; c < 3; ++c) {
        if (!(mat.albedo[c] >= 0.0 && mat.albedo[c] <= 1.0)) fail("surface albedo must lie in [0, 1]", at);
      }
    } else if (kind.text == "dielectric") {
      mat.kind = Material::Kind::Dielectric;
      const Token at = peek();
      mat.ior = number();
      if (!(mat.ior > 0.0)) fail("index of refraction must be positive", at);
    } else {
      fail("unknown material '" + kind.text + "'", kind);
    }
    return mat;
  }

  void primitive(const Token& head) {
    expect_open();
    Primitive p;
    Sphere sphere;
    Box box;
    Plane plane;
    bool has_material = false;
    while (auto key = block_key()) {
      const std::string& k = key->text;
      if (head.text == "sphere" && k == "center") {
        sphere.center = vec3();
      } else if (head.text == "sphere" && k == "radius") {
        const Token at = peek();
        sphere.radius = number();
        if (!(sphere.radius > 0.0)) fail("radius must be positive", at);
      } else if (head.text == "box" && k == "min") {
        box.lo = vec3();
      } else if (head.text == "box" && k == "max") {
        box.hi = vec3();
      } else if (head.text == "plane" && k == "point") {
        plane.point = vec3();
      } else if (head.text == "plane" && k == "normal") {
        const Token at = peek();
        const Vec3 n = vec3();
        if (!(length(n) > 0.0)) fail("normal must be nonzero", at);
        plane.normal = normalize(n);
      } else if (k == "medium" && head.text != "plane") {
        const Token name = expect_word("a medium name");
        p.medium = scene_.find_medium(name.text);
        if (p.medium < 0) fail("unknown medium '" + name.text + "'", name);
      } else if (k == "material") {
        p.material = material();
        has_material = true;
      } else {
        fail("unknown " + head.text + " key '" + k + "'", *key);
      }
      end_statement();
    }
    if (head.text == "sphere") {
      p.shape = sphere;
    } else if (head.text == "box") {
      for (int a = 0; a < 3; ++a) {
        if (!(box.hi[a] > box.lo[a])) fail("box max must exceed min on every axis", head);
      }
      p.shape = box;
    } else {
      p.shape = plane;
    }
    // Without a medium, a primitive defaults to a diffuse surface.
    if (!has_material && p.medium < 0) p.material.kind = Material::Kind::Lambertian;
    if (p.medium >= 0 && p.material.kind == Material::Kind::Lambertian) {
      fail("a medium inside an opaque primitive is unreachable", head);
    }
    scene_.primitives.push_back(p);
  }

  void light() {
    const Token kind = expect_word("point or area");
    const Token name = expect_word("a light name");
    if (scene_.find_light(name.text) >= 0) fail("duplicate light '" + name.text + "'", name);
    expect_open();
    Light l;
    l.name = name.text;
    if (kind.text == "point") {
      PointLight pl;
      while (auto key = block_key()) {
        if (key->text == "position") {
          pl.position = vec3();
        } else if (key->text == "intensity") {
          pl.intensity = rgb();
        } else {
          fail("unknown point light key '" + key->text + "'", *key);
        }
        end_statement();
      }
      l.emitter = pl;
    } else if (kind.text == "area") {
      AreaLight al;
      while (auto key = block_key()) {
        if (key->text == "corner") {
          al.rect.corner = vec3();
        } else if (key->text == "u") {
          al.rect.u = vec3();
        } else if (key->text == "v") {
          al.rect.v = vec3();
        } else if (key->text == "radiance") {
          al.radiance = rgb();
        } else {
          fail("unknown area light key '" + key->text + "'", *key);
        }
        end_statement();
      }
      if (!(al.rect.area() > 0.0)) fail("area light edges must span a nonzero area", name);
      l.emitter = al;
    } else {
      fail("unknown light type '" + kind.text + "'", kind);
    }
    scene_.lights.push_back(std::move(l));
  }

  void interface_block() {
    const Token a = expect_word("a medium name");
    const Token b = expect_word("a medium name");
    MediumInterface mi;
    mi.a = scene_.find_medium(a.text);
    if (mi.a < 0) fail("unknown medium '" + a.text + "'", a);
    mi.b = scene_.find_medium(b.text);
    if (mi.b < 0) fail("unknown medium '" + b.text + "'", b);
    expect_open();
    while (auto key = block_key()) {
      if (key->text == "c12") {
        const Token at = peek();
        mi.c12 = number();
        if (mi.c12 != 0.0) {
          fail("interface " + a.text + "/" + b.text +
                   ": nonzero cross-correlation c12 is not supported; efficient transport across "
                   "correlated heterogeneous media is an open problem (only c12 = 0 is accepted)",
               at);
        }
      } else {
        fail("unknown interface key '" + key->text + "'", *key);
      }
      end_statement();
    }
    scene_.interfaces.push_back(mi);
  }

  void resolve_light_models() {
    for (auto& p : pending_lights_) {
      const int light = scene_.find_light(p.name.text);
      if (light < 0) fail("unknown light '" + p.name.text + "'", p.name);
      scene_.media[p.medium].light_models[light] = p.models;
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  Scene scene_;
  std::vector<PendingLight> pending_lights_;
};

}  // namespace

SceneParseError::SceneParseError(const std::string& message, std::size_t line, std::size_t column)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {}

Scene parse_scene(std::string_view text) { return Parser(text).parse(); }

}  // namespace corrtrans::render
