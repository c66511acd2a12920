#include "totalimage/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include <CLI11.hpp>

#include "totalimage/corpus.hpp"
#include "totalimage/driver.hpp"
#include "totalimage/mapfile.hpp"

namespace totalimage {

namespace {

// Unreadable input or an unknown name; reported like a parse error.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Flags {
  std::string file;
  std::uint64_t seed = 0;
  std::string format = "text";
  unsigned characteristic = 0;
  std::size_t max_pairs = 0; // 0 keeps the library default
  int max_depth = -1;
  int retries = 5;
  std::string point;
  std::string corpus_name;
};

// Restores the process-wide guards when a command finishes.
struct LimitsScope {
  GbLimits saved = gb_limits();
  ~LimitsScope() { gb_limits() = saved; }
};

std::string read_input(const std::string &path) {
  if (path == "-") return {std::istreambuf_iterator<char>(std::cin), {}};
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  return {std::istreambuf_iterator<char>(in), {}};
}

std::vector<Rational> parse_point(const std::string &s) {
  std::vector<Rational> q;
  std::size_t start = 0;
  int col = 1;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i < s.size() && s[i] != ',') continue;
    std::string tok = detail::trim_segment(s.substr(start, i - start), 0).text;
    if (tok.empty()) throw ParseError(1, col, "empty point coordinate");
    Rational r;
    try {
      r = Rational(tok, 10);
    } catch (const std::invalid_argument &) {
      throw ParseError(1, col, "bad rational '" + tok + "'");
    }
    if (r.get_den() == 0) throw ParseError(1, col, "zero denominator in '" + tok + "'");
    r.canonicalize();
    q.push_back(r);
    start = i + 1;
    col = int(start) + 1;
  }
  return q;
}

std::string closure_line(const Ideal &z, Flavor fl, const std::string &format) {
  int d = dimension(z, fl);
  if (format == "json") {
    nlohmann::ordered_json j;
    j["dim"] = d;
    j["ideal"] = z.generator_strings();
    j["children"] = nlohmann::ordered_json::array();
    return j.dump(2) + "\n";
  }
  return "(" + std::to_string(d) + ") " + z.to_string() + "\n";
}

DriverOptions driver_options(const Flags &fl) {
  DriverOptions o;
  o.seed = fl.seed;
  o.max_depth = fl.max_depth;
  o.retries = fl.retries;
  return o;
}

int run_image(const Flags &fl, std::ostream &out, std::ostream &err) {
  RationalMap f = parse_map_file(read_input(fl.file));
  DriverReport rep;
  try {
    CTree t = total_image(f, driver_options(fl), &rep);
    out << (fl.format == "json" ? serialize_json(t) : serialize_text(t));
  } catch (...) {
    if (!rep.partial_tree.empty()) err << "partial tree:\n" << rep.partial_tree;
    throw;
  }
  for (auto &n : rep.notes) err << "note: " << n << "\n";
  return exit_ok;
}

int run_closure(const Flags &fl, std::ostream &out) {
  RationalMap f = parse_map_file(read_input(fl.file));
  gb_limits().characteristic = fl.characteristic;
  ImageEngine eng(f, fl.seed);
  out << closure_line(eng.image_closure(f.domain_ideal).trimmed(), f.flavor, fl.format);
  return exit_ok;
}

int run_member(const Flags &fl, std::ostream &out, std::ostream &err) {
  RationalMap f = parse_map_file(read_input(fl.file));
  std::vector<Rational> q = parse_point(fl.point);
  if (q.size() != f.target->size())
    throw ParseError(1, 1, "point has " + std::to_string(q.size()) + " coordinates, expected " +
                               std::to_string(f.target->size()));
  if (f.flavor == Flavor::projective) {
    bool zero = true;
    for (auto &c : q) zero = zero && c == 0;
    if (zero) throw ParseError(1, 1, "the zero vector is not a projective point");
  }
  CTree t = total_image(f, driver_options(fl));
  bool by_tree = member(t, q);
  bool by_fiber = fiber_nonempty(f, q);
  if (by_tree != by_fiber) {
    err << "error: tree says " << (by_tree ? "in-image" : "not-in-image") << " but the fiber oracle says "
        << (by_fiber ? "in-image" : "not-in-image") << "\n";
    return exit_failure;
  }
  out << (by_tree ? "in-image" : "not-in-image") << "\n";
  return exit_ok;
}

void add_common(CLI::App *c, Flags &fl) {
  c->add_option("--seed", fl.seed, "random seed (TOTALIMAGE_SEED sets the default)");
  c->add_option("--max-pairs", fl.max_pairs, "S-pair cap for each Groebner basis");
}

void add_driver(CLI::App *c, Flags &fl) {
  c->add_option("--max-depth", fl.max_depth, "frame levels before giving up");
  c->add_option("--retries", fl.retries, "attempts per generic section")->check(CLI::PositiveNumber);
}

} // namespace

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  Flags fl;
  if (const char *env = std::getenv("TOTALIMAGE_SEED")) {
    try {
      fl.seed = std::stoull(env);
    } catch (const std::exception &) {
      err << "error: TOTALIMAGE_SEED is not an unsigned integer\n";
      return exit_parse;
    }
  }

  CLI::App app{"Total image of a rational map as a constructible tree"};
  app.require_subcommand(1);
  auto *image = app.add_subcommand("image", "print the total image tree");
  auto *closure = app.add_subcommand("closure", "print the image closure");
  auto *memb = app.add_subcommand("member", "decide whether a point lies in the image");
  auto *corpus = app.add_subcommand("corpus", "built-in example maps");
  for (auto *c : {image, closure, memb}) {
    c->add_option("file", fl.file, "map file, or - for stdin")->required();
    add_common(c, fl);
  }
  for (auto *c : {image, memb}) add_driver(c, fl);
  for (auto *c : {image, closure})
    c->add_option("--format", fl.format, "text or json")->check(CLI::IsMember({"text", "json"}));
  closure->add_option("--char", fl.characteristic, "0 for the rationals, else a prime (heuristic)");
  memb->add_option("--point", fl.point, "comma separated coordinates c1,...,cm")->required();
  corpus->require_subcommand(1);
  auto *clist = corpus->add_subcommand("list", "names of the built-in maps");
  auto *cemit = corpus->add_subcommand("emit", "print a built-in map as a map file");
  cemit->add_option("name", fl.corpus_name)->required();

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::ParseError &e) {
    err << "error: " << e.what() << "\n";
    return exit_parse;
  }
  if (fl.characteristic != 0 && !upoly::is_prime_u(fl.characteristic)) {
    err << "error: --char must be 0 or a prime\n";
    return exit_parse;
  }

  LimitsScope scope;
  if (fl.max_pairs) gb_limits().max_pairs = fl.max_pairs;
  try {
    if (*image) return run_image(fl, out, err);
    if (*closure) return run_closure(fl, out);
    if (*memb) return run_member(fl, out, err);
    if (*clist) {
      for (auto &nm : corpus_maps()) out << nm.name << "\n";
      return exit_ok;
    }
    if (*cemit) {
      bool known = false;
      for (auto &nm : corpus_maps()) known = known || nm.name == fl.corpus_name;
      if (!known) throw InputError("unknown corpus map '" + fl.corpus_name + "'");
      out << emit_map_file(corpus_map(fl.corpus_name));
      return exit_ok;
    }
  } catch (const ParseError &e) {
    err << "parse error: " << e.what() << "\n";
    return exit_parse;
  } catch (const InputError &e) {
    err << "error: " << e.what() << "\n";
    return exit_parse;
  } catch (const StructuralError &e) {
    err << "parse error: " << e.what() << "\n";
    return exit_parse;
  } catch (const ComputationLimit &e) {
    err << "computation limit: " << e.what() << "\n";
    return exit_limit;
  } catch (const GenericityFailure &e) {
    err << "genericity failure: " << e.what() << "\n";
    return exit_genericity;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << "\n";
    return exit_failure;
  }
  return exit_failure;
}

} // namespace totalimage
