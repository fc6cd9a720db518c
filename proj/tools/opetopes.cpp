// Command-line front end. Every command reads one input (a file, "-" for
// stdin, or an --expr opetope) and prints canonical text or, with --json,
// a JSON document.
//
// exit status: 0 ok, 1 a check failed, 2 bad input or usage

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <opetopes/equiv.hpp>
#include <opetopes/io.hpp>

namespace {

  using namespace opetopes;
  using json = nlohmann::json;

  enum exit_code { ok = 0, failed = 1, bad_input = 2 };

  struct usage_error : std::runtime_error {
    using std::runtime_error::runtime_error;
  };

  struct Options {
    std::string input;
    std::string expr;
    std::string name;
    bool        as_json = false;
  };

  std::string read_input(std::string const& path) {
    if (path == "-") {
      return {std::istreambuf_iterator<char>(std::cin), {}};
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) {
      throw usage_error("cannot read " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  // Names the input in diagnostics.
  std::string source_name(Options const& o) {
    if (!o.expr.empty()) {
      return "<expr>";
    }
    return o.input == "-" ? "<stdin>" : o.input;
  }

  Environment load(Options const& o) {
    if (!o.expr.empty()) {
      Environment env;
      if (!o.input.empty()) {
        env = parse_file(read_input(o.input));
      }
      env.define({"_expr", parse_opetope(o.expr, &env), true, 0});
      return env;
    }
    if (o.input.empty()) {
      throw usage_error("no input: give a file, '-' or --expr");
    }
    return parse_file(read_input(o.input));
  }

  // The definition named by --name, else the last one of kind T.
  template <typename T>
  T const& pick(Environment const& env, Options const& o, char const* what) {
    if constexpr (std::is_same_v<T, Opetope>) {
      if (!o.expr.empty() && o.name.empty()) {
        return std::get<Opetope>(env.at("_expr").value);
      }
    }
    if (!o.name.empty()) {
      if (!env.has(o.name)) {
        throw usage_error("nothing is named " + o.name);
      }
      auto const& v = env.at(o.name).value;
      if (!std::holds_alternative<T>(v)) {
        throw usage_error(o.name + " is a " + kind_name(v) + ", not " + what);
      }
      return std::get<T>(v);
    }
    auto const& defs = env.definitions();
    for (auto it = defs.rbegin(); it != defs.rend(); ++it) {
      if (std::holds_alternative<T>(it->value)) {
        return std::get<T>(it->value);
      }
    }
    throw usage_error(std::string("the input defines no ") + what);
  }

  ////////////////////////////////////////////////////////////////////////
  // JSON

  json to_json(Opetope const& w) {
    static char const* const kinds[] = {"point", "arrow", "degenerate", "nodes"};
    json j{{"dim", w.dim()},
           {"kind", kinds[static_cast<int>(w.kind())]},
           {"text", w.str()}};
    if (w.is_degenerate()) {
      j["shell"] = w.shell().str();
    } else if (w.dim() >= 2) {
      json nodes = json::array();
      for (auto const& [p, op] : w.tree().nodes()) {
        nodes.push_back({{"address", to_string(p, w.dim() - 1)}, {"opetope", op.str()}});
      }
      j["nodes"] = nodes;
    }
    return j;
  }

  json to_json(Generator const& g) {
    json j{{"name", g.name}, {"dim", g.dim}};
    if (g.dim == 1) {
      j["source"] = g.source;
    }
    if (g.dim >= 2) {
      if (g.tree->is_unit()) {
        j["source_tree"] = {{"identity", g.tree->unit_color()}};
      } else {
        json nodes = json::array();
        for (auto const& [p, x] : g.tree->nodes()) {
          nodes.push_back({{"address", to_string(p, g.dim - 1)}, {"generator", x}});
        }
        j["source_tree"] = {{"nodes", nodes}};
      }
    }
    if (g.dim >= 1) {
      j["target"] = g.target;
    }
    return j;
  }

  json to_json(MtoPolygraph const& P) {
    json gens = json::array();
    for (std::size_t n = 0; n < P.dims(); ++n) {
      for (auto const& x : P.generators(n)) {
        gens.push_back(to_json(P.at(x)));
      }
    }
    return {{"generators", gens}};
  }

  json to_json(OpetopicSet const& X) {
    json cells = json::array();
    for (auto const& [name, c] : X.all()) {
      json faces = json::object();
      for (auto const& [f, y] : c.faces) {
        faces[to_string(f, c.shape.dim())] = y;
      }
      cells.push_back({{"name", name}, {"shape", c.shape.str()}, {"faces", faces}});
    }
    return {{"cells", cells}};
  }

  json to_json(Report const& r) {
    return {{"ok", r.ok()}, {"checked", r.checked}, {"problems", r.problems}};
  }

  json to_json(Value const& v) {
    return std::visit([](auto const& x) { return to_json(x); }, v);
  }

  ////////////////////////////////////////////////////////////////////////
  // Output helpers

  void emit(Options const& o, json const& j, std::string const& text) {
    if (o.as_json) {
      std::cout << j.dump(2) << "\n";
    } else {
      std::cout << text;
    }
  }

  std::string report_text(std::string const& label, Report const& r) {
    std::string out = label + ": " + (r.ok() ? "ok" : "FAIL") + " ("
                      + std::to_string(r.checked) + " checks)\n";
    for (auto const& p : r.problems) {
      out += "  " + p + "\n";
    }
    return out;
  }

  Report check_value(Value const& v) {
    return std::visit(
        [](auto const& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, Opetope>) {
            if (x.dim() < 2) {
              return Report{};
            }
            Report r = check_identities(x);
            r.merge(check_readdress(x));
            return r;
          } else {
            return validate(x);
          }
        },
        v);
  }

  ////////////////////////////////////////////////////////////////////////
  // Commands

  int cmd_validate(Options const& o) {
    auto env = load(o);
    json j   = json::object();
    std::string text;
    bool        all_ok = true;
    for (auto const& d : env.definitions()) {
      if (!o.name.empty() && d.name != o.name) {
        continue;
      }
      auto r = check_value(d.value);
      all_ok = all_ok && r.ok();
      j[d.name] = to_json(r);
      text += report_text(d.name, r);
    }
    if (!o.name.empty() && !env.has(o.name)) {
      throw usage_error("nothing is named " + o.name);
    }
    emit(o, j, text);
    return all_ok ? ok : failed;
  }

  int cmd_print(Options const& o) {
    auto env = load(o);
    if (o.name.empty()) {
      json j = json::object();
      for (auto const& d : env.definitions()) {
        j[d.name] = to_json(d.value);
      }
      emit(o, j, print_environment(env));
    } else {
      auto const& d = env.at(o.name);
      emit(o, to_json(d.value), print_definition(d));
    }
    return ok;
  }

  int cmd_target(Options const& o) {
    auto        env = load(o);
    auto const& w   = pick<Opetope>(env, o, "opetope");
    if (w.dim() == 0) {
      throw usage_error("the point has no target");
    }
    emit(o, to_json(w.target()), w.target().str() + "\n");
    return ok;
  }

  int cmd_source(Options const& o, std::string const& addr) {
    auto        env = load(o);
    auto const& w   = pick<Opetope>(env, o, "opetope");
    auto const& s   = w.source_at(parse_address(addr));
    emit(o, to_json(s), s.str() + "\n");
    return ok;
  }

  int cmd_leaves(Options const& o) {
    auto        env = load(o);
    auto const& w   = pick<Opetope>(env, o, "opetope");
    json        j   = json::array();
    std::string text;
    for (auto const& l : w.leaf_addresses()) {
      auto s = to_string(l, w.dim() == 0 ? 0 : w.dim() - 1);
      j.push_back(s);
      text += s + "\n";
    }
    emit(o, j, text);
    return ok;
  }

  int cmd_readdress(Options const& o) {
    auto        env = load(o);
    auto const& w   = pick<Opetope>(env, o, "opetope");
    if (w.dim() < 2) {
      throw usage_error("readdressing needs an opetope of dimension at least 2");
    }
    json        j = json::object();
    std::string text;
    for (auto const& [l, p] : w.readdress()) {
      auto a = to_string(l, w.dim() - 1);
      auto b = to_string(p, w.dim() - 2);
      j[a]   = b;
      text += a + " -> " + b + "\n";
    }
    emit(o, j, text);
    return ok;
  }

  int cmd_identities(Options const& o) {
    auto        env = load(o);
    auto const& w   = pick<Opetope>(env, o, "opetope");
    auto        a   = check_identities(w);
    auto        b   = check_readdress(w);
    emit(o, {{"identities", to_json(a)}, {"readdress", to_json(b)}},
         report_text("identities", a) + report_text("readdress", b));
    return a.ok() && b.ok() ? ok : failed;
  }

  int cmd_enumerate(Options const& o, std::size_t dim, std::size_t max_nodes, std::uint64_t cap) {
    auto        all = enumerate(dim, max_nodes, cap);
    json        j   = json::array();
    std::string text;
    for (auto const& w : all) {
      j.push_back(w.str());
      text += w.str() + "\n";
    }
    emit(o, j, text);
    return ok;
  }

  int cmd_hom(Options const& o, std::string const& from, std::string const& to) {
    Environment env;
    if (!o.input.empty()) {
      env = parse_file(read_input(o.input));
    }
    auto        phi = parse_opetope(from, &env);
    auto        w   = parse_opetope(to, &env);
    json        j   = json::array();
    std::string text;
    for (auto const& c : hom(phi, w)) {
      auto s = to_string(c.word, w.dim());
      j.push_back(s);
      text += s + "\n";
    }
    emit(o, {{"from", phi.str()}, {"to", w.str()}, {"count", j.size()}, {"morphisms", j}}, text);
    return ok;
  }

  int cmd_realize(Options const& o) {
    auto env = load(o);
    MtoPolygraph P;
    if (!o.name.empty() && std::holds_alternative<OpetopicSet>(env.at(o.name).value)) {
      P = realize_oset(std::get<OpetopicSet>(env.at(o.name).value));
    } else if (o.name.empty() && o.expr.empty()
               && std::holds_alternative<OpetopicSet>(env.last().value)) {
      P = realize_oset(std::get<OpetopicSet>(env.last().value));
    } else {
      P = realize_opetope(pick<Opetope>(env, o, "opetope or opetopic set"));
    }
    emit(o, to_json(P), print_polygraph(P));
    return ok;
  }

  int cmd_boundary(Options const& o, bool colimit) {
    auto        env = load(o);
    auto const& w   = pick<Opetope>(env, o, "opetope");
    auto        B   = boundary(w);
    if (!colimit) {
      emit(o, to_json(B), print_polygraph(B));
      return ok;
    }
    auto r = boundary_colimit_check(w);
    emit(o, to_json(r), report_text("colimit", r));
    return r.ok() ? ok : failed;
  }

  int cmd_shape(Options const& o, std::string const& gen) {
    auto        env = load(o);
    auto const& P   = pick<MtoPolygraph>(env, o, "polygraph");
    auto        r   = shape(P, gen);
    std::string text = r.shape.str() + "\n";
    json        induced = json::object();
    for (auto const& [word, x] : r.induced.map) {
      induced[word] = x;
      text += "  " + word + " -> " + detail::quote_name(x) + "\n";
    }
    emit(o, {{"shape", to_json(r.shape)}, {"induced", induced}}, text);
    return ok;
  }

  int cmd_nerve(Options const& o, std::optional<std::size_t> max_dim) {
    auto        env = load(o);
    auto const& P   = pick<MtoPolygraph>(env, o, "polygraph");
    auto        X   = nerve(P, max_dim.value_or(P.dims() == 0 ? 0 : P.dims() - 1));
    emit(o, to_json(X), print_oset(X));
    return ok;
  }

  int cmd_yoneda(Options const& o, std::optional<std::size_t> max_dim) {
    auto        env = load(o);
    auto const& w   = pick<Opetope>(env, o, "opetope");
    auto        X   = yoneda(w, max_dim.value_or(w.dim()));
    emit(o, to_json(X), print_oset(X));
    return ok;
  }

  int cmd_terminal(Options const& o, std::size_t max_dim, std::size_t budget, std::uint64_t cap) {
    auto T = terminal_polygraph(max_dim, budget, cap);
    emit(o, to_json(T), print_polygraph(T));
    return ok;
  }

  int cmd_roundtrip(Options const& o) {
    auto env = load(o);
    json j   = json::object();
    std::string text;
    bool        all_ok = true;
    auto note = [&](std::string const& label, Report const& r) {
      all_ok   = all_ok && r.ok();
      j[label] = to_json(r);
      text += report_text(label, r);
    };
    Value const* v = nullptr;
    if (!o.name.empty()) {
      v = &env.at(o.name).value;
    } else if (!o.expr.empty()) {
      v = &env.at("_expr").value;
    } else {
      v = &env.last().value;
    }
    if (auto const* w = std::get_if<Opetope>(v)) {
      note("unit", unit_check(yoneda(*w, w->dim())));
      note("counit", counit_check(realize_opetope(*w)));
    } else if (auto const* P = std::get_if<MtoPolygraph>(v)) {
      note("counit", counit_check(*P));
    } else {
      auto const& X = std::get<OpetopicSet>(*v);
      auto        r = validate(X);
      if (!r.ok()) {
        note("valid", r);
      } else {
        note("unit", unit_check(X));
      }
    }
    emit(o, j, text);
    return all_ok ? ok : failed;
  }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Opetopes, many-to-one polygraphs and opetopic sets"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  Options o;
  auto    common = [&](CLI::App* sub, bool needs_input = true) {
    if (needs_input) {
      sub->add_option("input", o.input, "input file, or - for stdin");
      sub->add_option("-e,--expr", o.expr, "an opetope expression instead of a file");
      sub->add_option("-n,--name", o.name, "definition to use (default: the last one)");
    }
    sub->add_flag("--json", o.as_json, "print JSON");
  };

  std::string addr, from, to, gen;
  std::size_t dim = 0, max_nodes = 0, budget = 2, tdim = 2;
  std::optional<std::size_t> max_dim;
  std::uint64_t cap     = default_enumeration_cap;
  bool          colimit = false;

  auto* validate_cmd = app.add_subcommand("validate", "check every definition (or --name)");
  auto* print_cmd    = app.add_subcommand("print", "print in canonical form");
  auto* target_cmd   = app.add_subcommand("target", "target of an opetope");
  auto* source_cmd   = app.add_subcommand("source", "source of an opetope at an address");
  auto* leaves_cmd   = app.add_subcommand("leaves", "leaf addresses of an opetope");
  auto* readdr_cmd   = app.add_subcommand("readdress", "leaves to nodes of the target");
  auto* ident_cmd    = app.add_subcommand("identities", "check the opetopic identities");
  auto* enum_cmd     = app.add_subcommand("enumerate", "all opetopes of a dimension");
  auto* hom_cmd      = app.add_subcommand("hom", "morphisms between two opetopes");
  auto* realize_cmd  = app.add_subcommand("realize", "polygraph of an opetope or opetopic set");
  auto* bound_cmd    = app.add_subcommand("boundary", "boundary polygraph of an opetope");
  auto* shape_cmd    = app.add_subcommand("shape", "shape of a generator");
  auto* nerve_cmd    = app.add_subcommand("nerve", "opetopic set of a polygraph");
  auto* yoneda_cmd   = app.add_subcommand("yoneda", "representable opetopic set");
  auto* term_cmd     = app.add_subcommand("terminal", "truncated terminal polygraph");
  auto* round_cmd    = app.add_subcommand("roundtrip", "unit and counit checks");

  for (auto* sub : {validate_cmd, print_cmd, target_cmd, source_cmd, leaves_cmd, readdr_cmd,
                    ident_cmd, realize_cmd, bound_cmd, shape_cmd, nerve_cmd, yoneda_cmd,
                    round_cmd}) {
    common(sub);
  }
  common(enum_cmd, false);
  common(term_cmd, false);
  common(hom_cmd, false);
  hom_cmd->add_option("input", o.input, "file whose opetopes --from and --to may name");

  source_cmd->add_option("-a,--addr", addr, "node address")->required();
  enum_cmd->add_option("-d,--dim", dim, "dimension")->required();
  enum_cmd->add_option("-m,--max-nodes", max_nodes, "node bound at every level")->required();
  enum_cmd->add_option("--cap", cap, "refuse to build more than this many");
  hom_cmd->add_option("--from", from, "domain")->required();
  hom_cmd->add_option("--to", to, "codomain")->required();
  bound_cmd->add_flag("--colimit", colimit, "compare with the gluing of face realizations");
  shape_cmd->add_option("-g,--gen", gen, "generator")->required();
  nerve_cmd->add_option("--max-dim", max_dim, "truncation");
  yoneda_cmd->add_option("--max-dim", max_dim, "truncation");
  term_cmd->add_option("--max-dim", tdim, "dimension");
  term_cmd->add_option("-b,--budget", budget, "nodes in a source");
  term_cmd->add_option("--cap", cap, "refuse to build more than this many trees");

  try {
    app.parse(argc, argv);
  } catch (CLI::ParseError const& e) {
    int rc = app.exit(e);
    return rc == 0 ? ok : bad_input;
  }

  try {
    if (*validate_cmd) return cmd_validate(o);
    if (*print_cmd) return cmd_print(o);
    if (*target_cmd) return cmd_target(o);
    if (*source_cmd) return cmd_source(o, addr);
    if (*leaves_cmd) return cmd_leaves(o);
    if (*readdr_cmd) return cmd_readdress(o);
    if (*ident_cmd) return cmd_identities(o);
    if (*enum_cmd) return cmd_enumerate(o, dim, max_nodes, cap);
    if (*hom_cmd) return cmd_hom(o, from, to);
    if (*realize_cmd) return cmd_realize(o);
    if (*bound_cmd) return cmd_boundary(o, colimit);
    if (*shape_cmd) return cmd_shape(o, gen);
    if (*nerve_cmd) return cmd_nerve(o, max_dim);
    if (*yoneda_cmd) return cmd_yoneda(o, max_dim);
    if (*term_cmd) return cmd_terminal(o, tdim, budget, cap);
    if (*round_cmd) return cmd_roundtrip(o);
  } catch (parse_error const& e) {
    std::cerr << source_name(o) << ":" << e.line() << ":" << e.column() << ": "
              << [&] {
                   std::string w = e.what();
                   auto        k = w.find(": ");
                   return k == std::string::npos ? w : w.substr(k + 2);
                 }()
              << "\n";
    return bad_input;
  } catch (usage_error const& e) {
    std::cerr << "opetopes: " << e.what() << "\n";
    return bad_input;
  } catch (error const& e) {
    std::cerr << "opetopes: " << source_name(o) << ": " << e.what() << "\n";
    return bad_input;
  }
  return bad_input;
}
