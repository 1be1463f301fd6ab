#include "dyadic/dsl.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "syntax.hpp"
#include "text_util.hpp"

namespace dyadic {

namespace {

using detail::Pair;
using detail::Reader;
using detail::Token;
using detail::TokenType;
using detail::Value;

struct Pos {
  int line = 1;
  int column = 1;
};

const std::set<std::string> kStatements{"scenario", "entity", "group", "action", "chain", "obligation", "provenance"};

bool is_statement(const Token& t) { return t.type == TokenType::identifier && kStatements.count(t.text); }

class ScenarioParser {
 public:
  explicit ScenarioParser(std::string_view source) { tokens_ = detail::tokenize(source, errors_); }

  Parsed<DyadicGraph> run() {
    Reader reader(tokens_, errors_);
    while (!reader.at_end()) {
      const Token& head = reader.peek();
      if (!is_statement(head)) {
        reader.error(head, "expected a statement (scenario, entity, group, action, chain, obligation, provenance), found '" +
                               head.text + "'");
        reader.recover(is_statement);
        continue;
      }
      const std::size_t errors_before = errors_.size();
      reader.advance();
      bool ok = false;
      if (head.text == "scenario") ok = scenario(reader, head);
      else if (head.text == "entity") ok = entity(reader, head, EntityKind::individual);
      else if (head.text == "group") ok = entity(reader, head, EntityKind::group);
      else if (head.text == "action") ok = action(reader, head);
      else if (head.text == "chain") ok = chain(reader, head);
      else if (head.text == "obligation") ok = obligation(reader, head);
      else ok = provenance(reader);
      if (!ok && errors_.size() > errors_before && !(reader.peek().line_start && is_statement(reader.peek())))
        reader.recover(is_statement);
    }

    if (!have_scenario_) errors_.insert(errors_.begin(), {1, 1, "no scenario declared", ParseErrorKind::syntax});

    resolve_references();
    apply_suffering_defaults();

    if (errors_.empty()) {
      for (const auto& v : validate_graph(graph_)) {
        Pos at = position_of(v.id);
        auto kind = ParseErrorKind::range;
        if (v.invariant == "referential-integrity") kind = ParseErrorKind::dangling_reference;
        if (v.invariant == "duplicate-id") kind = ParseErrorKind::duplicate_id;
        errors_.push_back({at.line, at.column, v.id + ": " + v.message, kind});
      }
    }
    std::stable_sort(errors_.begin(), errors_.end(), [](const ParseError& a, const ParseError& b) {
      return a.line != b.line ? a.line < b.line : a.column < b.column;
    });
    if (!errors_.empty()) return std::move(errors_);
    return std::move(graph_);
  }

 private:
  void error(int line, int column, std::string message, ParseErrorKind kind) {
    errors_.push_back({line, column, std::move(message), kind});
  }
  void error(const Pair& p, std::string message, ParseErrorKind kind = ParseErrorKind::range) {
    error(p.value->line, p.value->column, "'" + p.key + "': " + std::move(message), kind);
  }
  void unknown_key(const Pair& p, std::string_view where) {
    error(p.line, p.column, "unknown key '" + p.key + "' in " + std::string(where), ParseErrorKind::unknown_key);
  }

  Pos position_of(const std::string& id) const {
    for (const auto* table : {&entity_pos_, &edge_pos_, &obligation_pos_}) {
      auto it = table->find(id);
      if (it != table->end()) return it->second;
    }
    return chain_pos_;
  }

  std::optional<double> number(const Pair& p, double lo, double hi) {
    if (p.value->kind != Value::Kind::number) {
      error(p, "expected a number", ParseErrorKind::syntax);
      return std::nullopt;
    }
    double x = p.value->number;
    if (!(x >= lo && x <= hi)) {
      error(p, p.value->text + " outside [" + format_scalar(lo) + ", " + format_scalar(hi) + "]");
      return std::nullopt;
    }
    return x;
  }

  std::optional<bool> boolean(const Pair& p) {
    auto b = p.value->as_bool();
    if (!b) error(p, "expected true or false", ParseErrorKind::syntax);
    return b;
  }

  std::optional<std::string> name(const Pair& p) {
    auto n = p.value->as_name();
    if (!n) error(p, "expected an identifier or string", ParseErrorKind::syntax);
    return n;
  }

  std::optional<std::string> identifier(const Pair& p) {
    if (p.value->kind != Value::Kind::identifier) {
      error(p, "expected an identifier", ParseErrorKind::syntax);
      return std::nullopt;
    }
    return p.value->text;
  }

  std::optional<std::vector<std::string>> id_list(const Value& v, const std::string& key) {
    if (v.kind != Value::Kind::list) {
      error(v.line, v.column, "'" + key + "': expected a list of identifiers", ParseErrorKind::syntax);
      return std::nullopt;
    }
    std::vector<std::string> out;
    for (const auto& item : v.items) {
      if (item.kind != Value::Kind::identifier) {
        error(item.line, item.column, "'" + key + "': list items must be identifiers", ParseErrorKind::syntax);
        return std::nullopt;
      }
      out.push_back(item.text);
    }
    return out;
  }

  template <class Enum, class ParseFn>
  std::optional<Enum> enumeration(const Pair& p, ParseFn parse, std::string_view allowed) {
    auto text = p.value->as_name();
    std::optional<Enum> out;
    if (text) out = parse(*text);
    if (!out) error(p, "expected one of " + std::string(allowed), ParseErrorKind::syntax);
    return out;
  }

  bool scenario(Reader& r, const Token& head) {
    auto name = r.expect(TokenType::string, "scenario name string");
    if (!name) return false;
    if (have_scenario_) {
      error(head.line, head.column, "scenario declared twice", ParseErrorKind::duplicate_id);
    }
    have_scenario_ = true;
    graph_.name = name->text;
    if (r.peek().type == TokenType::lbrace && !r.peek().line_start) {
      auto pairs = r.block();
      if (!pairs) return false;
      for (const auto& p : *pairs) {
        if (p.key == "systemic_agents") {
          if (auto b = boolean(p)) graph_.systemic_agents_admissible = *b;
        } else {
          unknown_key(p, "scenario");
        }
      }
    }
    return true;
  }

  bool entity(Reader& r, const Token& head, EntityKind default_kind) {
    auto id = r.expect(TokenType::identifier, "entity id");
    if (!id) return false;
    auto pairs = r.block();
    if (!pairs) return false;

    EntityNode node;
    node.id = id->text;
    node.kind = default_kind;
    std::optional<int> size;
    for (const auto& p : *pairs) {
      if (p.key == "kind") {
        if (auto k = enumeration<EntityKind>(p, parse_entity_kind,
                                             "individual, group, institution, diffuse, system, supernatural"))
          node.kind = *k;
      } else if (p.key == "intentionality") {
        if (auto x = number(p, 0.0, 1.0)) node.intentionality = *x;
      } else if (p.key == "vulnerability") {
        if (auto x = number(p, 0.0, 1.0)) node.vulnerability = *x;
      } else if (p.key == "entitativity") {
        if (auto x = number(p, 0.0, 1.0)) node.entitativity = *x;
      } else if (p.key == "size") {
        if (p.value->kind != Value::Kind::number || p.value->text.find('.') != std::string::npos ||
            p.value->number < 1.0 || p.value->number > 1e9) {
          error(p, "expected an integer >= 1");
        } else {
          size = static_cast<int>(p.value->number);
        }
      } else if (p.key == "members") {
        if (auto m = id_list(*p.value, p.key)) node.members = std::move(*m);
      } else if (p.key == "latent") {
        if (auto b = boolean(p)) node.latent = *b;
      } else if (p.key == "synthetic") {
        if (auto b = boolean(p)) node.synthetic = *b;
      } else if (p.key == "lock") {
        if (auto l = enumeration<RoleLock>(p, parse_role_lock, "none, locked_agent, locked_patient")) node.lock = *l;
      } else if (p.key == "community") {
        if (auto c = name(p)) node.community = *c;
      } else {
        unknown_key(p, head.text + " '" + node.id + "'");
      }
    }
    node.group_size = size.value_or(std::max<int>(1, static_cast<int>(node.members.size())));

    if (graph_.entities.count(node.id)) {
      error(id->line, id->column, "entity '" + node.id + "' declared twice", ParseErrorKind::duplicate_id);
      return true;
    }
    entity_pos_[node.id] = {id->line, id->column};
    graph_.add_entity(std::move(node));
    return true;
  }

  std::optional<std::optional<std::string>> endpoint(Reader& r) {
    if (r.accept(TokenType::question)) return std::optional<std::string>{};
    auto id = r.expect(TokenType::identifier, "entity id or '?'");
    if (!id) return std::nullopt;
    return std::optional<std::string>{id->text};
  }

  bool action(Reader& r, const Token& head) {
    auto agent = endpoint(r);
    if (!agent) return false;
    if (!r.expect(TokenType::arrow, "'->'")) return false;
    auto patient = endpoint(r);
    if (!patient) return false;

    HarmEdge edge;
    edge.agent_id = *agent;
    edge.patient_id = *patient;
    edge.id = "e" + std::to_string(++action_count_);
    bool suffering_given = false;
    Pos pos{head.line, head.column};

    if (r.peek().type == TokenType::lbrace) {
      auto pairs = r.block();
      if (!pairs) return false;
      for (const auto& p : *pairs) {
        if (p.key == "id") {
          if (auto id = identifier(p)) edge.id = *id;
        } else if (p.key == "causality") {
          if (auto x = number(p, 0.0, 1.0)) edge.causality = *x;
        } else if (p.key == "valence") {
          if (auto x = number(p, -1.0, 1.0)) edge.valence = *x;
        } else if (p.key == "suffering") {
          suffering_given = true;
          if (auto x = number(p, 0.0, 1.0)) edge.suffering = *x;
        } else if (p.key == "exogenous") {
          if (auto x = number(p, 0.0, 1.0)) edge.exogenous_sufficiency = *x;
        } else if (p.key == "category") {
          if (auto c = name(p)) edge.act_category = *c;
        } else {
          unknown_key(p, "action");
        }
      }
    }
    if (edge_pos_.count(edge.id)) {
      error(pos.line, pos.column, "edge '" + edge.id + "' declared twice", ParseErrorKind::duplicate_id);
      return true;
    }
    edge_pos_[edge.id] = pos;
    suffering_given_.push_back(suffering_given);
    graph_.edges.push_back(std::move(edge));
    return true;
  }

  bool chain(Reader& r, const Token& head) {
    auto v = r.value();
    if (!v) return false;
    auto ids = id_list(*v, "chain");
    if (!ids) return false;
    if (graph_.chain_order) {
      error(head.line, head.column, "chain declared twice", ParseErrorKind::duplicate_id);
      return true;
    }
    chain_pos_ = {head.line, head.column};
    graph_.chain_order = std::move(*ids);
    return true;
  }

  bool provenance(Reader& r) {
    auto v = r.value();
    if (!v) return false;
    if (v->kind != Value::Kind::list) {
      error(v->line, v->column, "provenance expects a list", ParseErrorKind::syntax);
      return false;
    }
    for (const auto& item : v->items) {
      auto n = item.as_name();
      if (!n) {
        error(item.line, item.column, "provenance entries must be names", ParseErrorKind::syntax);
        continue;
      }
      graph_.provenance.push_back(*n);
    }
    return true;
  }

  bool obligation(Reader& r, const Token& head) {
    auto id = r.expect(TokenType::identifier, "obligation id");
    if (!id) return false;
    auto pairs = r.block();
    if (!pairs) return false;

    ObligationEdge ob;
    ob.id = id->text;
    bool has_agent = false;
    bool has_patient = false;
    for (const auto& p : *pairs) {
      if (p.key == "agent") {
        if (auto a = identifier(p)) ob.agent_id = *a, has_agent = true;
      } else if (p.key == "patient") {
        if (auto a = identifier(p)) ob.patient_id = *a, has_patient = true;
      } else if (p.key == "direction") {
        if (auto d = enumeration<Direction>(p, parse_direction, "promote, prevent")) ob.direction = *d;
      } else if (p.key == "tag") {
        if (auto t = name(p)) ob.action_tag = *t;
      } else if (p.key == "demanded_by") {
        if (auto s = identifier(p)) ob.demanded_by = *s;
      } else if (p.key == "agency") {
        if (auto a = enumeration<AgencyRequirement>(p, parse_agency, "none, low, high")) ob.agency_requirement = *a;
      } else if (p.key == "policy") {
        if (auto s = name(p)) ob.policy_id = *s;
      } else if (p.key == "excludes") {
        if (auto list = id_list(*p.value, p.key)) ob.excludes = std::move(*list);
      } else {
        unknown_key(p, "obligation '" + ob.id + "'");
      }
    }
    if (!has_agent) error(head.line, head.column, "obligation '" + ob.id + "' has no agent", ParseErrorKind::syntax);
    if (!has_patient) error(head.line, head.column, "obligation '" + ob.id + "' has no patient", ParseErrorKind::syntax);
    if (obligation_pos_.count(ob.id)) {
      error(id->line, id->column, "obligation '" + ob.id + "' declared twice", ParseErrorKind::duplicate_id);
      return true;
    }
    obligation_pos_[ob.id] = {id->line, id->column};
    graph_.obligations.push_back(std::move(ob));
    return true;
  }

  void dangling(const Pos& at, const std::string& what) {
    error(at.line, at.column, what, ParseErrorKind::dangling_reference);
  }

  void resolve_references() {
    for (const auto& [id, node] : graph_.entities) {
      for (const auto& m : node.members) {
        if (!graph_.entities.count(m)) dangling(entity_pos_[id], "member '" + m + "' of '" + id + "' is not declared");
      }
    }
    for (const auto& edge : graph_.edges) {
      for (const auto* end : {&edge.agent_id, &edge.patient_id}) {
        if (*end && !graph_.entities.count(**end))
          dangling(edge_pos_[edge.id], "action '" + edge.id + "' names undeclared entity '" + **end + "'");
      }
    }
    if (graph_.chain_order) {
      for (const auto& id : *graph_.chain_order) {
        if (!edge_pos_.count(id)) dangling(chain_pos_, "chain names undeclared action '" + id + "'");
      }
    }
    for (const auto& ob : graph_.obligations) {
      const Pos at = obligation_pos_[ob.id];
      if (!ob.agent_id.empty() && !graph_.entities.count(ob.agent_id))
        dangling(at, "obligation '" + ob.id + "' names undeclared agent '" + ob.agent_id + "'");
      if (!ob.patient_id.empty() && !graph_.entities.count(ob.patient_id))
        dangling(at, "obligation '" + ob.id + "' names undeclared patient '" + ob.patient_id + "'");
      if (ob.demanded_by && !graph_.entities.count(*ob.demanded_by))
        dangling(at, "obligation '" + ob.id + "' names undeclared stakeholder '" + *ob.demanded_by + "'");
      for (const auto& other : ob.excludes) {
        if (!obligation_pos_.count(other))
          dangling(at, "obligation '" + ob.id + "' excludes undeclared obligation '" + other + "'");
      }
    }
  }

  // Omitted suffering follows S = causality x patient vulnerability; an
  // open patient slot uses the default vulnerability 0.5.
  void apply_suffering_defaults() {
    for (std::size_t i = 0; i < graph_.edges.size(); ++i) {
      if (suffering_given_[i]) continue;
      auto& edge = graph_.edges[i];
      double p = 0.5;
      if (edge.patient_id) {
        if (const auto* patient = graph_.find_entity(*edge.patient_id)) p = patient->vulnerability;
      }
      edge.suffering = edge.causality * p;
    }
  }

  std::vector<ParseError> errors_;
  std::vector<Token> tokens_;
  DyadicGraph graph_;
  bool have_scenario_ = false;
  int action_count_ = 0;
  std::vector<bool> suffering_given_;
  std::map<std::string, Pos> entity_pos_;
  std::map<std::string, Pos> edge_pos_;
  std::map<std::string, Pos> obligation_pos_;
  Pos chain_pos_;
};

std::string id_list_text(const std::vector<std::string>& ids) {
  std::string out = "[";
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) out += ", ";
    out += ids[i];
  }
  return out + "]";
}

}  // namespace

Parsed<DyadicGraph> parse_scenario(std::string_view source) { return ScenarioParser(source).run(); }

std::string serialize_graph(const DyadicGraph& graph) {
  std::ostringstream out;
  out << "scenario " << detail::quote(graph.name);
  if (!graph.systemic_agents_admissible) out << " { systemic_agents: false }";
  out << "\n";

  for (const auto& [id, node] : graph.entities) {
    const bool as_group = node.kind == EntityKind::group;
    out << (as_group ? "group " : "entity ") << id << " {";
    if (!as_group) out << " kind: " << to_string(node.kind) << ",";
    out << " intentionality: " << format_scalar(node.intentionality)
        << ", vulnerability: " << format_scalar(node.vulnerability);
    if (node.is_collective()) {
      out << ", members: " << id_list_text(node.members) << ", size: " << node.group_size;
    }
    out << ", entitativity: " << format_scalar(node.entitativity);
    if (node.latent) out << ", latent: true";
    if (node.synthetic) out << ", synthetic: true";
    if (node.lock != RoleLock::none) out << ", lock: " << to_string(node.lock);
    if (node.community) out << ", community: " << detail::quote(*node.community);
    out << " }\n";
  }

  for (const auto& edge : graph.edges) {
    out << "action " << edge.agent_id.value_or("?") << " -> " << edge.patient_id.value_or("?") << " { id: " << edge.id
        << ", causality: " << format_scalar(edge.causality) << ", valence: " << format_scalar(edge.valence)
        << ", suffering: " << format_scalar(edge.suffering)
        << ", exogenous: " << format_scalar(edge.exogenous_sufficiency)
        << ", category: " << detail::quote(edge.act_category) << " }\n";
  }

  if (graph.chain_order) out << "chain " << id_list_text(*graph.chain_order) << "\n";

  for (const auto& ob : graph.obligations) {
    out << "obligation " << ob.id << " { agent: " << ob.agent_id << ", patient: " << ob.patient_id
        << ", direction: " << to_string(ob.direction) << ", tag: " << detail::quote(ob.action_tag);
    if (ob.demanded_by) out << ", demanded_by: " << *ob.demanded_by;
    out << ", agency: " << to_string(ob.agency_requirement);
    if (!ob.policy_id.empty()) out << ", policy: " << detail::quote(ob.policy_id);
    if (!ob.excludes.empty()) out << ", excludes: " << id_list_text(ob.excludes);
    out << " }\n";
  }

  if (!graph.provenance.empty()) {
    out << "provenance [";
    for (std::size_t i = 0; i < graph.provenance.size(); ++i) {
      if (i) out << ", ";
      out << detail::quote(graph.provenance[i]);
    }
    out << "]\n";
  }
  return out.str();
}

}  // namespace dyadic
