#include "coh/cli.hpp"

#include "coh/coherence.hpp"
#include "coh/fp.hpp"
#include "coh/json_io.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

namespace coh::cli {

namespace {

constexpr std::size_t kMaxDepth = 12;
constexpr std::size_t kMaxVariables = 4;

// ---------------------------------------------------------------------------
// Input validation and caps.

std::size_t variable_cap() {
  return std::getenv("COH_MAX_DIM") ? max_dimension() : kMaxVariables;
}

void check_depth(std::size_t d, std::string_view text) {
  if (d > kMaxDepth)
    throw DimensionError("formula depth " + std::to_string(d) + " exceeds the cap of " +
                         std::to_string(kMaxDepth) + ": " + std::string(text));
}

void check_variables(const VarContext& ctx) {
  if (ctx.size() > variable_cap())
    throw DimensionError(std::to_string(ctx.size()) + " variables exceed the cap of " +
                         std::to_string(variable_cap()));
}

void check_event_count(std::size_t k) {
  if (k > max_dimension())
    throw DimensionError(std::to_string(k) + " events exceed the cap of " +
                         std::to_string(max_dimension()));
}

EventFormula event(const std::string& text) {
  EventFormula e = parse_event(text);
  check_depth(depth(e), text);
  return e;
}

ModalFormula modal(const std::string& text) {
  ModalFormula m = parse_modal(text);
  check_depth(depth(m), text);
  for (const auto& e : events(m)) check_depth(depth(e), text);
  return m;
}

// Inner variables and event count of a set of modal formulas.
void check_modal(const std::vector<ModalFormula>& ms) {
  const auto evs = events(ms);
  check_event_count(evs.size());
  check_variables(variables(evs));
}

EventList event_list(const std::vector<std::string>& texts) {
  if (texts.empty()) throw InputError("at least one event is required");
  std::vector<EventFormula> evs;
  for (const auto& t : texts) evs.push_back(event(t));
  check_event_count(evs.size());
  EventList list(std::move(evs));
  check_variables(list.context());
  return list;
}

Book book(const std::vector<std::string>& prices, std::size_t k) {
  if (prices.size() != k)
    throw InputError(std::to_string(prices.size()) + " prices given for " + std::to_string(k) +
                     " events");
  Book b;
  for (const auto& p : prices) b.prices.push_back(parse_rational(p));
  return b;
}

// "P(φ)" or bare "φ".
EventFormula atom_of(const std::string& text) {
  try {
    const ModalFormula m = parse_modal(text);
    if (m.op() == Connective::Atom) return m.atom_value();
  } catch (const ParseError&) {
  }
  return event(text);
}

std::pair<std::string, std::string> split_eq(const std::string& text, std::string_view what) {
  const auto pos = text.find('=');
  if (pos == std::string::npos || text.find('=', pos + 1) != std::string::npos)
    throw InputError(std::string(what) + " must have the form LHS=RHS: '" + text + "'");
  return {text.substr(0, pos), text.substr(pos + 1)};
}

ProbSubstitution substitution(const std::vector<std::pair<std::string, std::string>>& entries) {
  ProbSubstitution s;
  for (const auto& [atom, image] : entries) s.set(atom_of(atom), modal(image));
  return s;
}

std::vector<std::pair<std::string, std::string>> split_all(const std::vector<std::string>& texts,
                                                           std::string_view what) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& t : texts) out.push_back(split_eq(t, what));
  return out;
}

// ---------------------------------------------------------------------------
// Queries. Each produces a JSON document and a human rendering.

struct Outcome {
  Json json;
  std::string text;
};

std::string point_text(std::span<const ExactRational> p) { return to_string(p); }

std::string assignment_text(const VarContext& ctx, const Point& p) {
  std::string s = "(";
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) s += ", ";
    s += ctx.name(i) + "=" + to_string(p[i]);
  }
  return s + ")";
}

std::string halfspace_text(const Halfspace& h, std::string_view rel) {
  std::string s;
  for (std::size_t i = 0; i < h.normal.size(); ++i) {
    if (h.normal[i] == 0) continue;
    const BigInt& c = h.normal[i];
    if (!s.empty()) s += c < 0 ? " - " : " + ";
    else if (c < 0) s += "-";
    const BigInt m = abs(c);
    if (m != 1) s += m.get_str() + "*";
    s += "x" + std::to_string(i + 1);
  }
  if (s.empty()) s = "0";
  return s + " " + std::string(rel) + " " + h.offset.get_str();
}

Outcome polytope_outcome(const Polytope& p) {
  std::ostringstream t;
  t << "dimension " << p.dimension() << "\nvertices:\n";
  for (const auto& v : p.vertices()) t << "  " << point_text(v) << "\n";
  if (!p.equations().empty()) t << "equations:\n";
  for (const auto& h : p.equations()) t << "  " << halfspace_text(h, "=") << "\n";
  t << "facets:\n";
  for (const auto& h : p.facets()) t << "  " << halfspace_text(h, "<=") << "\n";
  return {to_json(p), t.str()};
}

Outcome verdict_outcome(const EventList& list, const CoherenceVerdict& v) {
  std::ostringstream t;
  if (v.coherent) {
    t << "coherent\nwitness:\n";
    for (std::size_t j = 0; j < v.witness->points.size(); ++j)
      t << "  " << to_string(v.witness->weights[j]) << " at "
        << assignment_text(list.context(), v.witness->points[j]) << "\n";
  } else {
    t << "incoherent\nDutch book stakes:";
    for (const auto& s : v.dutch_book->stakes) t << " " << to_string(s);
    t << "\nguaranteed loss: " << to_string(v.dutch_book->guaranteed_loss) << "\n";
  }
  return {to_json(v), t.str()};
}

Outcome consequence_outcome(const ConsequenceResult& r) {
  std::ostringstream t;
  t << (r.holds ? "holds" : "fails") << "\n";
  if (r.countermodel) {
    t << "countermodel:\n";
    const auto& m = *r.countermodel;
    for (std::size_t i = 0; i < m.events.size(); ++i)
      t << "  " << modal_atom_text(m.events[i]) << " = " << to_string(m.book.prices[i])
        << "\n";
  }
  return {to_json(r), t.str()};
}

Outcome do_check(const std::vector<std::string>& evs, const std::vector<std::string>& prices) {
  const EventList list = event_list(evs);
  const Book b = book(prices, list.size());
  return verdict_outcome(list, check_book(list, b));
}

Outcome do_set(const std::vector<std::string>& evs) {
  return polytope_outcome(coherent_set(event_list(evs)).polytope);
}

Outcome do_extend(const std::vector<std::string>& evs, const std::vector<std::string>& prices,
                  const std::string& extra_text) {
  const EventList list = event_list(evs);
  const Book b = book(prices, list.size());
  const EventFormula extra = event(extra_text);
  VarContext all = list.context();
  all.merge(variables(extra));
  check_variables(all);
  check_event_count(list.size() + 1);
  const auto r = extension_interval(list, b, extra);
  if (const auto* i = std::get_if<Interval>(&r))
    return {to_json(*i), "[" + to_string(i->lo) + ", " + to_string(i->hi) + "]\n"};
  CoherenceVerdict v;
  v.dutch_book = std::get<DutchBook>(r);
  return verdict_outcome(list, v);
}

ModalFormula fold_premises(const std::vector<std::string>& texts) {
  if (texts.empty()) return ModalFormula::top();
  ModalFormula acc = modal(texts.front());
  for (std::size_t i = 1; i < texts.size(); ++i) acc = ModalFormula::land(acc, modal(texts[i]));
  return acc;
}

Outcome do_entail(const std::vector<std::string>& premises, const std::string& conclusion) {
  const ModalFormula phi = fold_premises(premises);
  const ModalFormula psi = modal(conclusion);
  check_modal({phi, psi});
  return consequence_outcome(decide_consequence(phi, psi));
}

Outcome do_ldt(const std::vector<std::string>& premises, const std::string& conclusion) {
  const ModalFormula phi = fold_premises(premises);
  const ModalFormula psi = modal(conclusion);
  check_modal({phi, psi});
  const auto n = local_deduction_exponent(phi, psi);
  Json j;
  j["holds"] = n.has_value();
  if (n) j["exponent"] = *n;
  return {j, n ? "exponent " + std::to_string(*n) + "\n" : std::string("fails\n")};
}

Outcome do_chi_events(const std::vector<std::string>& evs) {
  const EventList list = event_list(evs);
  const CoherentSet cs = coherent_set(list);
  std::vector<std::string> names;
  for (std::size_t i = 0; i < list.size(); ++i) names.push_back("p" + std::to_string(i + 1));
  const VarContext ctx(names);
  const EventFormula chi = chi_synthesis(cs.polytope, ctx);
  Json vars = Json::object();
  std::string t = canonical_serialize(chi) + "\n";
  for (std::size_t i = 0; i < list.size(); ++i) {
    vars[names[i]] = canonical_serialize(list[i]);
    t += "  " + names[i] + " = " + modal_atom_text(list[i]) + "\n";
  }
  return {Json{{"formula", canonical_serialize(chi)}, {"variables", std::move(vars)}}, t};
}

Outcome do_chi_points(const std::vector<std::string>& pts) {
  std::vector<Point> points;
  for (const auto& text : pts) {
    Point p;
    std::stringstream ss(text);
    std::string c;
    while (std::getline(ss, c, ',')) p.push_back(parse_rational(c));
    points.push_back(std::move(p));
  }
  if (points.empty()) throw InputError("at least one point is required");
  const std::size_t n = points.front().size();
  for (const auto& p : points)
    if (p.size() != n) throw InputError("points have different dimensions");
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("x" + std::to_string(i + 1));
  const VarContext ctx(names);
  check_variables(ctx);
  const EventFormula chi = chi_synthesis(Polytope::hull(n, std::move(points)), ctx);
  return {Json{{"formula", canonical_serialize(chi)}}, canonical_serialize(chi) + "\n"};
}

Outcome do_unify_verify(const std::vector<std::pair<std::string, std::string>>& identities,
                        const std::vector<std::pair<std::string, std::string>>& sigma_entries,
                        const std::vector<std::string>& declared_texts) {
  std::vector<std::pair<ModalFormula, ModalFormula>> ids;
  std::vector<ModalFormula> all;
  for (const auto& [l, r] : identities) {
    ids.emplace_back(modal(l), modal(r));
    all.push_back(ids.back().first);
    all.push_back(ids.back().second);
  }
  std::vector<EventFormula> declared;
  for (const auto& d : declared_texts) declared.push_back(atom_of(d));
  const UnificationProblem problem = make_unification_problem(std::move(ids), declared);
  const ProbSubstitution sigma = substitution(sigma_entries);
  for (const auto& a : problem.atoms) all.push_back(sigma.at(a));
  check_modal(all);
  check_event_count(problem.atoms.size());

  Json j;
  const SubstitutionCheck sub = is_prob_substitution(sigma, problem.atoms);
  const bool holds = sub.holds && verify_unifier(problem, sigma);
  j["holds"] = holds;
  std::string t = holds ? "unifier\n" : "not a unifier\n";
  if (!sub.holds) {
    j["witness"] = to_json(*sub.witness);
    t += "not a probabilistic substitution: image point " + point_text(*sub.witness) +
         " is incoherent\n";
  }
  return {j, t};
}

Outcome do_unify_generality(const std::vector<std::string>& declared_texts,
                            const std::vector<std::pair<std::string, std::string>>& identities,
                            const std::vector<std::pair<std::string, std::string>>& s,
                            const std::vector<std::pair<std::string, std::string>>& t,
                            const std::vector<std::pair<std::string, std::string>>& d) {
  std::vector<std::pair<ModalFormula, ModalFormula>> ids;
  for (const auto& [l, r] : identities) ids.emplace_back(modal(l), modal(r));
  std::vector<EventFormula> declared;
  for (const auto& a : declared_texts) declared.push_back(atom_of(a));
  const UnificationProblem problem = make_unification_problem(std::move(ids), declared);
  if (problem.atoms.empty()) throw InputError("no atoms: give --atom or --identity");
  const bool holds =
      verify_generality(substitution(s), substitution(t), substitution(d), problem);
  return {Json{{"holds", holds}}, holds ? "more general\n" : "not shown more general\n"};
}

// ---------------------------------------------------------------------------
// Batch files.

std::vector<std::string> strings(const Json& j, std::string_view field) {
  if (!j.is_array()) throw InputError(std::string(field) + " must be an array of strings");
  std::vector<std::string> out;
  for (const auto& x : j) {
    if (!x.is_string()) throw InputError(std::string(field) + " must be an array of strings");
    out.push_back(x.get<std::string>());
  }
  return out;
}

std::vector<std::string> batch_prices(const Json& q, const std::vector<std::string>& evs) {
  const Json& b = q.at("book");
  if (b.is_array()) return strings(b, "book");
  if (!b.is_object()) throw InputError("book must be an object {event: price} or an array");
  std::vector<std::string> out;
  for (const auto& e : evs) {
    if (!b.contains(e)) throw InputError("book has no price for event '" + e + "'");
    if (!b.at(e).is_string()) throw InputError("prices must be strings like \"1/2\"");
    out.push_back(b.at(e).get<std::string>());
  }
  if (b.size() != evs.size()) throw InputError("book prices events that are not listed");
  return out;
}

std::vector<std::pair<std::string, std::string>> batch_map(const Json& j, std::string_view field) {
  if (!j.is_object()) throw InputError(std::string(field) + " must be an object");
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& [k, v] : j.items()) {
    if (!v.is_string()) throw InputError(std::string(field) + " values must be strings");
    out.emplace_back(k, v.get<std::string>());
  }
  return out;
}

std::vector<std::pair<std::string, std::string>> batch_identities(const Json& j) {
  std::vector<std::pair<std::string, std::string>> out;
  if (!j.is_array()) throw InputError("identities must be an array of [lhs, rhs] pairs");
  for (const auto& p : j) {
    const auto s = strings(p, "identity");
    if (s.size() != 2) throw InputError("identities must be [lhs, rhs] pairs");
    out.emplace_back(s[0], s[1]);
  }
  return out;
}

std::vector<std::string> batch_premises(const Json& q) {
  if (!q.contains("premise")) return {};
  const Json& p = q.at("premise");
  if (p.is_string()) return {p.get<std::string>()};
  return strings(p, "premise");
}

std::string kind_of(const Json& q) {
  if (q.contains("query")) return q.at("query").get<std::string>();
  if (q.contains("substitution") && q.contains("identities")) return "unify";
  if (q.contains("conclusion")) return q.contains("premise") ? "entail" : "prove";
  if (q.contains("book")) return q.contains("new") ? "extend" : "check";
  if (q.contains("events")) return "set";
  throw InputError("cannot infer the query kind; add a \"query\" field");
}

Outcome batch_query(const Json& q) {
  if (!q.is_object()) throw InputError("each query must be a JSON object");
  const std::string kind = kind_of(q);
  const auto evs = [&] { return strings(q.at("events"), "events"); };
  if (kind == "check") return do_check(evs(), batch_prices(q, evs()));
  if (kind == "set") return do_set(evs());
  if (kind == "extend") return do_extend(evs(), batch_prices(q, evs()), q.at("new").get<std::string>());
  if (kind == "prove") return do_entail({}, q.at("conclusion").get<std::string>());
  if (kind == "entail")
    return do_entail(batch_premises(q), q.at("conclusion").get<std::string>());
  if (kind == "ldt") return do_ldt(batch_premises(q), q.at("conclusion").get<std::string>());
  if (kind == "chi") return do_chi_events(evs());
  if (kind == "unify") {
    std::vector<std::string> declared;
    if (q.contains("events")) declared = evs();
    return do_unify_verify(batch_identities(q.at("identities")),
                           batch_map(q.at("substitution"), "substitution"), declared);
  }
  throw InputError("unknown query kind '" + kind + "'");
}

// Runs `f`, mapping library errors to exit codes and messages.
template <class F>
int guarded(F&& f, std::string& message) {
  try {
    f();
    return kOk;
  } catch (const DimensionError& e) {
    message = e.what();
    return kDimensionError;
  } catch (const InputError& e) {
    message = e.what();
    return kInputError;
  } catch (const nlohmann::json::exception& e) {
    message = std::string("malformed query: ") + e.what();
    return kInputError;
  } catch (const std::exception& e) {
    message = e.what();
    return kInternal;
  }
}

Outcome do_batch(const std::string& path, unsigned jobs, int& code) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("invalid JSON: ") + e.what());
  }
  const Json queries = doc.is_object() && doc.contains("queries") ? doc.at("queries") : doc;
  if (!queries.is_array()) throw InputError("batch file must be an array of queries");

  std::vector<Json> results(queries.size());
  std::vector<int> codes(queries.size(), kOk);
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i; (i = next++) < queries.size();) {
      std::string message;
      Outcome o;
      codes[i] = guarded([&] { o = batch_query(queries[i]); }, message);
      results[i] = codes[i] == kOk ? o.json : Json{{"error", message}, {"exit_code", codes[i]}};
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(jobs, queries.size()));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  code = codes.empty() ? kOk : *std::max_element(codes.begin(), codes.end());
  Json arr = Json::array();
  std::string text;
  for (std::size_t i = 0; i < results.size(); ++i) {
    arr.push_back(results[i]);
    text += "[" + std::to_string(i) + "] " + results[i].dump() + "\n";
  }
  return {arr, text};
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact coherence checking and FP(Ł,Ł) consequence", "coh"};
  app.require_subcommand(1);
  bool json_out = false;
  app.add_flag("--json", json_out, "Print results as JSON");

  std::vector<std::string> evs, prices, premises, points, sigma, tau, delta, identities, atoms;
  std::string extra, conclusion, formula, batch_file;
  unsigned jobs = 1;

  auto* check = app.add_subcommand("check", "Decide coherence of a book");
  check->add_option("--events", evs, "Event formulas")->required();
  check->add_option("--book", prices, "Prices p/q, one per event")->required();

  auto* set = app.add_subcommand("set", "Print the coherent set of an event list");
  set->add_option("--events", evs, "Event formulas")->required();

  auto* extend = app.add_subcommand("extend", "Coherent price interval for a new event");
  extend->add_option("--events", evs, "Event formulas")->required();
  extend->add_option("--book", prices, "Prices p/q, one per event")->required();
  extend->add_option("--new", extra, "The new event")->required();

  auto* fp = app.add_subcommand("fp", "Probability logic FP(Ł,Ł)");
  fp->require_subcommand(1);
  auto* prove = fp->add_subcommand("prove", "Decide theoremhood");
  prove->add_option("formula", formula, "Modal formula")->required();
  auto* entail = fp->add_subcommand("entail", "Decide consequence from premises");
  entail->add_option("--premise", premises, "Premise (repeatable; folded by &)")->required();
  entail->add_option("--conclusion", conclusion, "Conclusion")->required();

  auto* chi = app.add_subcommand("chi", "Formula whose oneset is a given polytope");
  auto* chi_events = chi->add_option("--events", evs, "Events; synthesizes the coherent set's formula");
  auto* chi_points = chi->add_option("--points", points, "Points \"a,b,...\"; synthesizes their hull's formula");
  chi_events->excludes(chi_points);
  chi_points->excludes(chi_events);

  auto* ldt = app.add_subcommand("ldt", "Least exponent n with ⊢ Φ^n → Ψ");
  ldt->add_option("--premise", premises, "Premise (repeatable; folded by &)")->required();
  ldt->add_option("--conclusion", conclusion, "Conclusion")->required();

  auto* unify = app.add_subcommand("unify", "Probabilistic unifiers");
  unify->require_subcommand(1);
  auto* uverify = unify->add_subcommand("verify", "Check that σ unifies the identities");
  uverify->add_option("--identity", identities, "Identity LHS=RHS (repeatable)")->required();
  uverify->add_option("--sigma", sigma, "Substitution entry ATOM=IMAGE (repeatable)")->required();
  uverify->add_option("--atom", atoms, "Extra declared atom (repeatable)");
  auto* ugen = unify->add_subcommand("generality", "Check σ = δ∘τ atomwise");
  ugen->add_option("--identity", identities, "Identity LHS=RHS (repeatable)");
  ugen->add_option("--atom", atoms, "Declared atom (repeatable)");
  ugen->add_option("--sigma", sigma, "σ entry ATOM=IMAGE")->required();
  ugen->add_option("--tau", tau, "τ entry ATOM=IMAGE")->required();
  ugen->add_option("--delta", delta, "δ entry ATOM=IMAGE");

  auto* batch = app.add_subcommand("batch", "Run a JSON file of queries");
  batch->add_option("file", batch_file, "Query file")->required()->check(CLI::ExistingFile);
  batch->add_option("--jobs", jobs, "Concurrent queries")->check(CLI::Range(1u, 256u));

  for (auto* sub : {check, set, extend, fp, prove, entail, chi, ldt, unify, uverify, ugen, batch})
    sub->fallthrough();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }

  Outcome result;
  std::string message;
  int batch_code = kOk;
  const int code = guarded(
      [&] {
        if (check->parsed()) result = do_check(evs, prices);
        else if (set->parsed()) result = do_set(evs);
        else if (extend->parsed()) result = do_extend(evs, prices, extra);
        else if (prove->parsed()) result = do_entail({}, formula);
        else if (entail->parsed()) result = do_entail(premises, conclusion);
        else if (chi->parsed()) {
          if (!points.empty()) result = do_chi_points(points);
          else if (!evs.empty()) result = do_chi_events(evs);
          else throw InputError("chi needs --events or --points");
        } else if (ldt->parsed()) result = do_ldt(premises, conclusion);
        else if (uverify->parsed())
          result = do_unify_verify(split_all(identities, "identity"),
                                   split_all(sigma, "substitution entry"), atoms);
        else if (ugen->parsed())
          result = do_unify_generality(atoms, split_all(identities, "identity"),
                                       split_all(sigma, "substitution entry"),
                                       split_all(tau, "substitution entry"),
                                       split_all(delta, "substitution entry"));
        else if (batch->parsed()) result = do_batch(batch_file, jobs, batch_code);
      },
      message);
  if (code != kOk) {
    if (json_out) out << Json{{"error", message}, {"exit_code", code}}.dump() << "\n";
    err << "error: " << message << "\n";
    return code;
  }
  out << (json_out ? result.json.dump() + "\n" : result.text);
  return batch_code;
}

}  // namespace coh::cli
