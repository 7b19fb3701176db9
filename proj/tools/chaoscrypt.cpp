// chaoscrypt command-line front end.
//
// Exit status: 0 success, 1 usage, 2 data error, 3 capacity/constraint error.

#include <cmath>
#include <cstdint>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "chaoscrypt/chaoscrypt.hpp"

namespace cc = chaoscrypt;
using nlohmann::json;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitConstraint = 3;

// "1", "2", "3" select a built-in case; anything else is a config file path.
cc::HybridMap load_map(const std::string& spec) {
  if (spec == "1" || spec == "2" || spec == "3") return cc::HybridMap(cc::hybrid_case(spec[0] - '0'));
  return cc::HybridMap(cc::load_hybrid_config(spec));
}

// Image file or ciphertext container (the padded ciphertext image).
cc::Image load_any_image(const std::string& path) {
  const auto bytes = cc::read_file_bytes(path);
  if (cc::is_container(bytes)) return cc::decode_container(bytes).image;
  try {
    return cc::decode_image(bytes);
  } catch (const cc::FormatError& e) {
    throw cc::FormatError(path + ": " + e.what());
  }
}

cc::KeySpace load_keys(const std::string& path) { return cc::parse_key_space(cc::read_file_text(path)); }

bool ends_with(const std::string& s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

struct Manifest {
  json j;

  explicit Manifest(std::string command) { j["command"] = std::move(command); }
  void input(const std::string& role, const std::string& path) { j["inputs"][role] = path; }
  void output(const std::string& role, const std::string& path) { j["outputs"][role] = path; }
  void param(const std::string& name, json v) { j["parameters"][name] = std::move(v); }

  // Written after every output so a manifest implies a complete run.
  void write_next_to(const std::string& out) const {
    cc::write_file_atomic(out + ".manifest.json", j.dump(2) + "\n");
  }
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

// Parses "R" or "RxC" (e.g. "80x80").
std::pair<std::size_t, std::size_t> parse_size(const std::string& s) {
  const auto x = s.find('x');
  try {
    if (x == std::string::npos) {
      const auto v = std::stoul(s);
      return {v, v};
    }
    return {std::stoul(s.substr(0, x)), std::stoul(s.substr(x + 1))};
  } catch (const std::exception&) {
    throw cc::FormatError("size must look like ROWSxCOLS, got '" + s + "'");
  }
}

// Runs f with the requested map type.
template <class F>
void with_map(const std::string& kind, const std::string& cfg, F&& f) {
  if (kind == "hybrid") f(load_map(cfg));
  else if (kind == "logistic1d") f(cc::Logistic1D{});
  else if (kind == "logistic2d") f(cc::Logistic2D{});
  else if (kind == "slmm") f(cc::Slmm{});
  else throw cc::ConfigError("unknown map '" + kind + "'");
}

// ---------------------------------------------------------------------------

struct KeygenArgs {
  std::string image, text, text_file, out, cfg = "3";
  double r1 = 0.0, r2 = 0.0;
  std::uint64_t seed = 0;
};

void run_keygen(const KeygenArgs& a) {
  const cc::Image img = cc::load_image(a.image);
  const std::string text = a.text_file.empty() ? a.text : cc::read_file_text(a.text_file);
  std::mt19937_64 rng(a.seed);
  const cc::KeySpace k = cc::generate_keys(img, text, a.r1, a.r2, rng, load_map(a.cfg));
  cc::write_file_atomic(a.out, cc::serialize(k));

  Manifest m("keygen");
  m.input("image", a.image);
  if (!a.text_file.empty()) m.input("text", a.text_file);
  else m.param("text", a.text);
  m.param("r1", a.r1);
  m.param("r2", a.r2);
  m.param("seed", a.seed);
  m.param("config", a.cfg);
  m.output("key", a.out);
  m.write_next_to(a.out);
}

struct CipherArgs {
  std::string image, key, out, cfg = "3", orig_size;
};

void run_encrypt(const CipherArgs& a) {
  const cc::Image img = cc::load_image(a.image);
  const cc::Ciphertext ct = cc::encrypt(img, load_keys(a.key), load_map(a.cfg));
  if (ends_with(a.out, ".hcac")) cc::write_file_atomic(a.out, cc::encode_container(ct));
  else cc::save_image(ct.image, a.out);

  Manifest m("encrypt");
  m.input("image", a.image);
  m.input("key", a.key);
  m.param("config", a.cfg);
  m.param("orig_size", std::to_string(ct.header.orig_rows) + "x" + std::to_string(ct.header.orig_cols));
  m.param("padded_size", std::to_string(ct.header.rows) + "x" + std::to_string(ct.header.cols));
  m.output("ciphertext", a.out);
  m.write_next_to(a.out);
}

void run_decrypt(const CipherArgs& a) {
  const auto bytes = cc::read_file_bytes(a.image);
  cc::Ciphertext ct;
  if (cc::is_container(bytes)) {
    ct = cc::decode_container(bytes);
  } else {
    ct.image = cc::decode_image(bytes);
    std::size_t r = 0, c = 0;
    if (!a.orig_size.empty()) std::tie(r, c) = parse_size(a.orig_size);
    ct.header = cc::header_for(ct.image, r, c);
  }
  const cc::Image plain = cc::decrypt(ct, load_keys(a.key), load_map(a.cfg));
  cc::save_image(plain, a.out);

  Manifest m("decrypt");
  m.input("ciphertext", a.image);
  m.input("key", a.key);
  m.param("config", a.cfg);
  if (!a.orig_size.empty()) m.param("orig_size", a.orig_size);
  m.output("image", a.out);
  m.write_next_to(a.out);
}

struct StegoArgs {
  std::string cover, secret, stego, key, out, plan, cfg = "3", transform = "framelet";
  std::vector<std::uint64_t> shifts{1000, 1000};
  int refine = 8;
};

void run_embed(const StegoArgs& a) {
  const cc::Image cover = cc::load_image(a.cover);
  const cc::Image secret = cc::load_image(a.secret);
  cc::StegoOptions opt;
  opt.shift1 = a.shifts.at(0);
  opt.shift2 = a.shifts.at(1);
  opt.refine_passes = a.refine;
  if (a.transform == "identity") opt.transform = cc::StegoTransform::identity;
  else if (a.transform != "framelet") throw cc::ConfigError("transform must be framelet or identity");
  const auto res = cc::embed_any(cover, secret, load_keys(a.key), load_map(a.cfg), opt);
  const std::string plan = a.plan.empty() ? a.out + ".plan" : a.plan;
  cc::save_image(res.stego, a.out);
  cc::write_file_atomic(plan, cc::serialize(res.plan));

  Manifest m("embed");
  m.input("cover", a.cover);
  m.input("secret", a.secret);
  m.input("key", a.key);
  m.param("config", a.cfg);
  m.param("shifts", a.shifts);
  m.param("transform", a.transform);
  m.param("refine_passes", a.refine);
  m.param("wrong_slots", res.wrong_slots);
  m.param("psnr_cover_stego", fmt(cc::psnr(cover, res.stego)));
  m.output("stego", a.out);
  m.output("plan", plan);
  m.write_next_to(a.out);
  std::cout << "PSNR(cover, stego) = " << fmt(cc::psnr(cover, res.stego)) << " dB, unmatched slots "
            << res.wrong_slots << "\n";
}

void run_extract(const StegoArgs& a) {
  const cc::Image stego = cc::load_image(a.stego);
  const cc::EmbedPlan plan = cc::parse_embed_plan(cc::read_file_text(a.plan));
  const cc::KeySpace keys = load_keys(a.key);
  if (plan.key_fingerprint != cc::key_fingerprint(keys))
    std::cerr << "warning: key file does not match the key used for embedding\n";
  cc::save_image(cc::extract(stego, keys, plan, load_map(a.cfg)), a.out);

  Manifest m("extract");
  m.input("stego", a.stego);
  m.input("plan", a.plan);
  m.input("key", a.key);
  m.param("config", a.cfg);
  m.param("shifts", std::vector<std::uint64_t>{plan.shift1, plan.shift2});
  m.output("secret", a.out);
  m.write_next_to(a.out);
}

struct AnalyzeArgs {
  std::string a, b, report;
  std::size_t pairs = 10000;
  std::uint64_t seed = 1;
};

std::string report_text(const cc::MetricsReport& r) {
  std::ostringstream os;
  os.precision(6);
  os << std::fixed;
  for (std::size_t k = 0; k < r.planes.size(); ++k) {
    const auto& p = r.planes[k];
    os << "plane " << k << " entropy " << p.entropy << " chi_square " << p.chi_square;
    for (std::size_t d = 0; d < 4; ++d) {
      os << ' ' << cc::to_string(cc::kAdjacencies[d]) << ' ';
      if (p.correlation[d]) os << *p.correlation[d];
      else os << "undefined";
    }
    os << '\n';
  }
  if (r.diff)
    for (std::size_t k = 0; k < r.diff->npcr.size(); ++k)
      os << "plane " << k << " npcr " << r.diff->npcr[k] << " uaci " << r.diff->uaci[k] << '\n';
  if (r.psnr) {
    os << "psnr ";
    if (std::isfinite(*r.psnr)) os << *r.psnr << '\n';
    else os << "identical\n";
  }
  return os.str();
}

void run_analyze(const AnalyzeArgs& a) {
  const cc::Image ia = load_any_image(a.a);
  std::optional<cc::Image> ib;
  if (!a.b.empty()) ib = load_any_image(a.b);
  const auto rep = cc::analyze(ia, ib ? &*ib : nullptr, a.pairs, a.seed);
  const std::string text = report_text(rep);
  std::cout << text;
  if (a.report.empty()) return;
  cc::write_file_atomic(a.report, ends_with(a.report, ".json") ? cc::to_json(rep).dump(2) + "\n" : text);

  Manifest m("analyze");
  m.input("a", a.a);
  if (!a.b.empty()) m.input("b", a.b);
  m.param("pairs", a.pairs);
  m.param("seed", a.seed);
  m.output("report", a.report);
  m.write_next_to(a.report);
}

struct ChaosArgs {
  std::string what, cfg = "3", map = "hybrid", out;
  double r = 1.19, r_max = NAN, x0 = 0.1, y0 = 0.2;
  std::size_t n = 100000, bins = 100, steps = 1, transient = 500, keep = 100;
};

void run_chaos(const ChaosArgs& a) {
  std::string csv;
  const double r_max = std::isnan(a.r_max) ? a.r : a.r_max;
  with_map(a.map, a.cfg, [&](const auto& map) {
    if (a.what == "distribution") {
      csv = cc::distribution_csv(cc::sequence(map, a.x0, a.y0, a.r, a.n));
    } else if (a.what == "histogram") {
      csv = cc::histogram_csv(cc::sequence(map, a.x0, a.y0, a.r, a.n), a.bins);
    } else if (a.what == "cobweb") {
      csv = cc::cobweb_csv(cc::sequence(map, a.x0, a.y0, a.r, a.n));
    } else if (a.what == "lyapunov") {
      cc::LyapunovOptions opt;
      opt.iterations = a.n;
      csv = cc::lyapunov_csv(map, a.x0, a.y0, a.r, r_max, a.steps, opt);
    } else {
      csv = cc::bifurcation_csv(cc::bifurcation_scan(map, a.x0, a.y0, a.r, r_max, a.steps, a.transient, a.keep));
    }
  });
  cc::write_file_atomic(a.out, csv);

  Manifest m("chaos " + a.what);
  m.param("map", a.map);
  if (a.map == "hybrid") m.param("config", a.cfg);
  m.param("r", a.r);
  m.param("r_max", r_max);
  m.param("x0", a.x0);
  m.param("y0", a.y0);
  m.param("n", a.n);
  if (a.what == "histogram") m.param("bins", a.bins);
  if (a.what == "lyapunov" || a.what == "bifurcation") m.param("steps", a.steps);
  if (a.what == "bifurcation") {
    m.param("transient", a.transient);
    m.param("keep", a.keep);
  }
  m.output("csv", a.out);
  m.write_next_to(a.out);
}

struct DemoArgs {
  std::string what, image, out;
  std::uint64_t amount = 0;
  int kind = 1;
  bool inverse = false;
};

void run_demo(const DemoArgs& a) {
  cc::Image img = cc::load_image(a.image);
  const auto dir = a.inverse ? cc::Direction::inverse : cc::Direction::forward;
  if (a.what == "ring-shift") {
    if (img.kind() == cc::ImageKind::color) {
      auto lcr = cc::ring_shift_lcr(std::array<cc::Plane, 3>{img.plane(0), img.plane(1), img.plane(2)},
                                    a.amount, dir);
      img = cc::Image(img.kind(), {lcr[0], lcr[1], lcr[2]});
    } else {
      img.plane(0) = cc::ring_shift_gray(img.plane(0), a.amount, dir);
    }
  } else {
    if (a.kind != 1 && a.kind != 2) throw cc::ConfigError("spiral kind must be 1 or 2");
    img = cc::Image(img.kind(), cc::spiral_shift(img.planes(), a.kind == 1 ? cc::SpiralKind::one : cc::SpiralKind::two,
                                                 a.amount, dir));
  }
  cc::save_image(img, a.out);

  Manifest m("demo " + a.what);
  m.input("image", a.image);
  m.param("amount", a.amount);
  if (a.what == "spiral-shift") m.param("kind", a.kind);
  m.param("inverse", a.inverse);
  m.output("image", a.out);
  m.write_next_to(a.out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Chaos and cellular-automaton image cipher with framelet steganography"};
  app.require_subcommand(1);
  std::string cfg_help = "hybrid map: built-in case 1, 2 or 3, or a config file";

  KeygenArgs kg;
  auto* keygen = app.add_subcommand("keygen", "derive a key file from an image and a text");
  keygen->add_option("--image", kg.image, "plain image")->required()->check(CLI::ExistingFile);
  auto* text_opt = keygen->add_option("--text", kg.text, "key text");
  keygen->add_option("--text-file", kg.text_file, "read the key text from a file")
      ->check(CLI::ExistingFile)
      ->excludes(text_opt);
  keygen->add_option("--r1", kg.r1, "permutation control parameter")->required();
  keygen->add_option("--r2", kg.r2, "automaton control parameter")->required();
  keygen->add_option("--seed", kg.seed, "nonce generator seed")->required();
  keygen->add_option("--case", kg.cfg, cfg_help)->capture_default_str();
  keygen->add_option("--out", kg.out, "key file")->required();

  CipherArgs ea, da;
  auto* enc = app.add_subcommand("encrypt", "encrypt an image (.hcac output keeps the header)");
  enc->add_option("--image", ea.image)->required()->check(CLI::ExistingFile);
  enc->add_option("--key", ea.key)->required()->check(CLI::ExistingFile);
  enc->add_option("--case", ea.cfg, cfg_help)->capture_default_str();
  enc->add_option("--out", ea.out, "ciphertext: .hcac container or an image file")->required();

  auto* dec = app.add_subcommand("decrypt", "decrypt a container or a bare ciphertext image");
  dec->add_option("--image", da.image)->required()->check(CLI::ExistingFile);
  dec->add_option("--key", da.key)->required()->check(CLI::ExistingFile);
  dec->add_option("--case", da.cfg, cfg_help)->capture_default_str();
  dec->add_option("--orig-size", da.orig_size, "crop a bare ciphertext image to ROWSxCOLS");
  dec->add_option("--out", da.out)->required();

  StegoArgs ema, exa;
  auto* emb = app.add_subcommand("embed", "hide a secret image in a cover");
  emb->add_option("--cover", ema.cover)->required()->check(CLI::ExistingFile);
  emb->add_option("--secret", ema.secret)->required()->check(CLI::ExistingFile);
  emb->add_option("--key", ema.key)->required()->check(CLI::ExistingFile);
  emb->add_option("--case", ema.cfg, cfg_help)->capture_default_str();
  emb->add_option("--shifts", ema.shifts, "spiral shift amounts A,B")
      ->delimiter(',')
      ->expected(2)
      ->capture_default_str();
  emb->add_option("--transform", ema.transform, "framelet or identity")->capture_default_str();
  emb->add_option("--refine", ema.refine, "LL correction passes")->capture_default_str();
  emb->add_option("--plan", ema.plan, "plan file (default: <out>.plan)");
  emb->add_option("--out", ema.out, "stego image")->required();

  auto* ext = app.add_subcommand("extract", "recover a secret image from a stego image");
  ext->add_option("--stego", exa.stego)->required()->check(CLI::ExistingFile);
  ext->add_option("--plan", exa.plan)->required()->check(CLI::ExistingFile);
  ext->add_option("--key", exa.key)->required()->check(CLI::ExistingFile);
  ext->add_option("--case", exa.cfg, cfg_help)->capture_default_str();
  ext->add_option("--out", exa.out)->required();

  AnalyzeArgs an;
  auto* ana = app.add_subcommand("analyze", "entropy, correlation, NPCR/UACI and PSNR");
  ana->add_option("--a", an.a, "image to analyze")->required()->check(CLI::ExistingFile);
  ana->add_option("--b", an.b, "reference image for NPCR/UACI and PSNR")->check(CLI::ExistingFile);
  ana->add_option("--pairs", an.pairs, "sampled pairs per direction (0 = all)")->capture_default_str();
  ana->add_option("--seed", an.seed, "sampling seed")->capture_default_str();
  ana->add_option("--report", an.report, "report file (.json for JSON)");

  ChaosArgs ch;
  auto* chaos = app.add_subcommand("chaos", "export map diagnostics as CSV");
  chaos->add_option("what", ch.what, "distribution|histogram|cobweb|lyapunov|bifurcation")
      ->required()
      ->check(CLI::IsMember({"distribution", "histogram", "cobweb", "lyapunov", "bifurcation"}));
  chaos->add_option("--case", ch.cfg, cfg_help)->capture_default_str();
  chaos->add_option("--map", ch.map, "hybrid|logistic1d|logistic2d|slmm")->capture_default_str();
  chaos->add_option("--r", ch.r, "control parameter (scan start)")->capture_default_str();
  chaos->add_option("--r-max", ch.r_max, "scan end (default: --r)");
  chaos->add_option("--steps", ch.steps, "parameter grid points")->capture_default_str();
  chaos->add_option("--n", ch.n, "sequence length or Lyapunov iterations")->capture_default_str();
  chaos->add_option("--x0", ch.x0)->capture_default_str();
  chaos->add_option("--y0", ch.y0)->capture_default_str();
  chaos->add_option("--bins", ch.bins)->capture_default_str();
  chaos->add_option("--transient", ch.transient)->capture_default_str();
  chaos->add_option("--keep", ch.keep)->capture_default_str();
  chaos->add_option("--out", ch.out, "CSV file")->required();

  DemoArgs dm;
  auto* demo = app.add_subcommand("demo", "apply a ring or spiral shift to an image");
  demo->add_option("what", dm.what, "ring-shift|spiral-shift")
      ->required()
      ->check(CLI::IsMember({"ring-shift", "spiral-shift"}));
  demo->add_option("--image", dm.image)->required()->check(CLI::ExistingFile);
  demo->add_option("--amount", dm.amount)->required();
  demo->add_option("--kind", dm.kind, "spiral kind 1 or 2")->capture_default_str();
  demo->add_flag("--inverse", dm.inverse, "undo the shift");
  demo->add_option("--out", dm.out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (*keygen) {
      if (kg.text.empty() && kg.text_file.empty()) {
        std::cerr << "keygen: one of --text or --text-file is required\n";
        return kExitUsage;
      }
      run_keygen(kg);
    } else if (*enc) {
      run_encrypt(ea);
    } else if (*dec) {
      run_decrypt(da);
    } else if (*emb) {
      run_embed(ema);
    } else if (*ext) {
      run_extract(exa);
    } else if (*ana) {
      run_analyze(an);
    } else if (*chaos) {
      run_chaos(ch);
    } else if (*demo) {
      run_demo(dm);
    }
  } catch (const cc::CapacityError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConstraint;
  } catch (const cc::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConstraint;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return 0;
}
