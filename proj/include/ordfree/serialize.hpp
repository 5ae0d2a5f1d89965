#pragma once

#include <json.hpp>

#include "ordfree/dirprod.hpp"
#include "ordfree/example.hpp"
#include "ordfree/pingpong.hpp"
#include "ordfree/transitivity.hpp"
#include "ordfree/version.hpp"

// JSON round-tripping for every artifact the tools read or write. Kept in one
// place: descriptor nodes and lazy rules are type-switched here rather than
// spreading the json dependency through the core headers.

namespace ordfree {

using nlohmann::json;

// --- scalars ------------------------------------------------------------------

inline json to_json(const Rational& x) { return to_string(x); }
inline Rational rational_from_json(const json& j) {
  if (!j.is_string()) throw ParseError("expected rational string");
  return parse_rational(j.get<std::string>());
}

inline json to_json(const Interval& v) { return to_string(v); }
inline Interval interval_from_json(const json& j) {
  if (!j.is_string()) throw ParseError("expected interval string");
  return parse_interval(j.get<std::string>());
}

inline json to_json(const Branch& b) { return b.str(); }
inline Branch branch_from_json(const json& j) {
  if (!j.is_string()) throw ParseError("expected branch string");
  return Branch::parse(j.get<std::string>());
}

// --- frames and selectors -------------------------------------------------------

inline json tail_to_json(const Frame::Tail& t) {
  json j;
  if (const auto* a = std::get_if<Frame::ArithTail>(&t)) {
    j["kind"] = "arith";
    j["step"] = to_json(a->step);
  } else {
    const auto& g = std::get<Frame::GeomTail>(t);
    j["kind"] = "geom";
    j["limit"] = to_json(g.limit);
    j["ratio"] = to_json(g.ratio);
  }
  return j;
}

inline Frame::Tail tail_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "arith") return Frame::ArithTail{rational_from_json(j.at("step"))};
  if (kind == "geom")
    return Frame::GeomTail{rational_from_json(j.at("limit")), rational_from_json(j.at("ratio"))};
  throw ParseError("unknown frame tail kind '" + kind + "'");
}

inline json to_json(const Frame& f) {
  json j;
  j["kind"] = f.kind() == Frame::IndexKind::integers ? "integers" : "naturals";
  j["first"] = f.first_explicit_index();
  json pts = json::array();
  for (const auto& p : f.explicit_points()) pts.push_back(to_json(p));
  j["points"] = std::move(pts);
  j["up"] = tail_to_json(f.up_tail());
  if (f.down_tail()) j["down"] = tail_to_json(*f.down_tail());
  return j;
}

inline Frame frame_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  Frame::IndexKind k;
  if (kind == "integers")
    k = Frame::IndexKind::integers;
  else if (kind == "naturals")
    k = Frame::IndexKind::naturals;
  else
    throw ParseError("unknown frame kind '" + kind + "'");
  std::vector<Rational> pts;
  for (const auto& p : j.at("points")) pts.push_back(rational_from_json(p));
  std::optional<Frame::Tail> down;
  if (j.contains("down")) down = tail_from_json(j.at("down"));
  return Frame(k, j.at("first").get<std::int64_t>(), std::move(pts),
               tail_from_json(j.at("up")), std::move(down));
}

inline json to_json(const Selector& s) {
  json j;
  if (const auto* r = std::get_if<ResidueSel>(&s)) {
    j["kind"] = "residue";
    j["modulus"] = r->modulus;
    j["residues"] = r->residues;
    if (!r->excluded.empty()) j["excluded"] = r->excluded;
  } else if (const auto* f = std::get_if<FiniteSel>(&s)) {
    j["kind"] = "finite";
    j["indices"] = f->indices;
  } else if (const auto* c = std::get_if<CofiniteSel>(&s)) {
    j["kind"] = "cofinite";
    j["excluded"] = c->excluded;
  } else {
    j["kind"] = "branch";
    j["branch"] = to_json(std::get<BranchSel>(s).branch);
  }
  return j;
}

inline Selector selector_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "residue") {
    std::vector<std::int64_t> excluded;
    if (j.contains("excluded")) excluded = j.at("excluded").get<std::vector<std::int64_t>>();
    return select_residue(j.at("modulus").get<std::int64_t>(),
                          j.at("residues").get<std::vector<std::int64_t>>(), std::move(excluded));
  }
  if (kind == "finite") {
    auto idx = j.at("indices").get<std::vector<std::int64_t>>();
    std::sort(idx.begin(), idx.end());
    return FiniteSel{std::move(idx)};
  }
  if (kind == "cofinite") {
    auto idx = j.at("excluded").get<std::vector<std::int64_t>>();
    std::sort(idx.begin(), idx.end());
    return CofiniteSel{std::move(idx)};
  }
  if (kind == "branch") return BranchSel{branch_from_json(j.at("branch"))};
  throw ParseError("unknown selector kind '" + kind + "'");
}

inline json to_json(const BlockSet& bs) {
  json j;
  j["frame"] = to_json(bs.frame);
  j["selector"] = to_json(bs.selector);
  return j;
}
inline BlockSet blockset_from_json(const json& j) {
  return BlockSet(frame_from_json(j.at("frame")), selector_from_json(j.at("selector")));
}

// --- piecewise maps -------------------------------------------------------------

inline json to_json(const PiecewiseLinear& pl) {
  json pieces = json::array();
  for (std::size_t k = 0; k + 1 < pl.xs().size(); ++k) {
    json piece;
    piece["from"] = json::array({to_json(pl.xs()[k]), to_json(pl.xs()[k + 1])});
    piece["to"] = json::array({to_json(pl.ys()[k]), to_json(pl.ys()[k + 1])});
    pieces.push_back(std::move(piece));
  }
  return pieces;
}

inline PiecewiseLinear pl_from_json(const json& j) {
  if (!j.is_array()) throw ParseError("expected piece array");
  std::vector<Rational> xs, ys;
  for (const auto& piece : j) {
    const auto& from = piece.at("from");
    const auto& to = piece.at("to");
    Rational a = rational_from_json(from.at(0)), b = rational_from_json(from.at(1));
    Rational c = rational_from_json(to.at(0)), d = rational_from_json(to.at(1));
    if (xs.empty()) {
      xs.push_back(std::move(a));
      ys.push_back(std::move(c));
    } else if (xs.back() != a || ys.back() != c) {
      throw ParseError("pieces do not chain");
    }
    xs.push_back(std::move(b));
    ys.push_back(std::move(d));
  }
  return PiecewiseLinear(std::move(xs), std::move(ys));
}

// --- declared support ------------------------------------------------------------

inline json to_json(const DeclaredSupport& s) {
  if (s.is_empty()) return json{{"kind", "empty"}};
  json parts = json::array();
  for (const auto& r : s.regions()) {
    if (std::holds_alternative<DeclaredSupport::All>(r)) {
      parts.push_back(json{{"kind", "all"}});
    } else if (const auto* v = std::get_if<Interval>(&r)) {
      parts.push_back(json{{"kind", "interval"}, {"interval", to_json(*v)}});
    } else {
      parts.push_back(json{{"kind", "blocks"}, {"blocks", to_json(std::get<BlockSet>(r))}});
    }
  }
  if (parts.size() == 1) return parts[0];
  return json{{"kind", "union"}, {"parts", std::move(parts)}};
}

inline DeclaredSupport support_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "empty") return DeclaredSupport::empty();
  if (kind == "all") return DeclaredSupport::everything();
  if (kind == "interval") return DeclaredSupport::interval(interval_from_json(j.at("interval")));
  if (kind == "blocks") return DeclaredSupport::blocks(blockset_from_json(j.at("blocks")));
  if (kind == "union") {
    std::vector<DeclaredSupport> parts;
    for (const auto& p : j.at("parts")) parts.push_back(support_from_json(p));
    return DeclaredSupport::union_of(std::move(parts));
  }
  throw ParseError("unknown support kind '" + kind + "'");
}

// --- descriptors and rules --------------------------------------------------------

inline json to_json(const MapDescriptor& d);
inline MapDescriptor map_from_json(const json& j);

inline json to_json(const BlockFreeFamily& fam) {
  json j;
  j["hull"] = to_json(fam.hull());
  j["frame"] = to_json(fam.frame());
  j["selector"] = to_json(fam.selected());
  return j;
}
inline BlockFreeFamily family_from_json(const json& j) {
  return BlockFreeFamily(interval_from_json(j.at("hull")), frame_from_json(j.at("frame")),
                         selector_from_json(j.at("selector")));
}

inline json rule_to_json(const BlockRule& rule) {
  json j;
  j["name"] = rule.rule_name();
  if (const auto* r = dynamic_cast<const StretchSquashRule*>(&rule)) {
    j["frame"] = to_json(r->fine_frame());
    j["offset"] = r->offset();
  } else if (const auto* c = dynamic_cast<const CameronRule*>(&rule)) {
    j["family"] = to_json(c->family());
    j["branch"] = to_json(c->branch());
  } else if (const auto* m = dynamic_cast<const FamilyMemberRule*>(&rule)) {
    j["family"] = to_json(m->family());
    j["index"] = m->index();
  } else if (const auto* ic = dynamic_cast<const IntervalCameronRule*>(&rule)) {
    j["collection"] = to_json(ic->collection());
    j["branch"] = to_json(ic->branch());
  } else if (const auto* cr = dynamic_cast<const ClassRankedRule*>(&rule)) {
    j["collection"] = to_json(cr->partition().base);
    j["ranks"] = cr->partition().ranks;
    j["index"] = cr->index();
  } else if (const auto* rt = dynamic_cast<const ReservedTailRule*>(&rule)) {
    j["collection"] = to_json(rt->collection());
    j["index"] = rt->index();
  } else {
    throw DomainError(std::string("unserializable rule '") + rule.rule_name() + "'");
  }
  return j;
}

inline std::shared_ptr<const BlockRule> rule_from_json(const json& j) {
  const std::string name = j.at("name").get<std::string>();
  if (name == "stretch_squash")
    return std::make_shared<StretchSquashRule>(frame_from_json(j.at("frame")),
                                               j.at("offset").get<std::int64_t>());
  if (name == "cameron")
    return std::make_shared<CameronRule>(family_from_json(j.at("family")),
                                         branch_from_json(j.at("branch")));
  if (name == "family_member")
    return std::make_shared<FamilyMemberRule>(family_from_json(j.at("family")),
                                              j.at("index").get<std::uint64_t>());
  if (name == "interval_cameron")
    return std::make_shared<IntervalCameronRule>(blockset_from_json(j.at("collection")),
                                                 branch_from_json(j.at("branch")));
  if (name == "class_ranked") {
    PartitionedFamily part{blockset_from_json(j.at("collection")),
                           j.at("ranks").get<std::vector<std::uint64_t>>()};
    return std::make_shared<ClassRankedRule>(std::move(part), j.at("index").get<std::uint64_t>());
  }
  if (name == "reserved_tail")
    return std::make_shared<ReservedTailRule>(blockset_from_json(j.at("collection")),
                                              j.at("index").get<std::uint64_t>());
  throw ParseError("unknown rule '" + name + "'");
}

inline json to_json(const MapDescriptor& d) {
  json j;
  switch (d.kind()) {
    case MapKind::identity:
      j["type"] = "identity";
      break;
    case MapKind::affine: {
      const auto& n = static_cast<const AffineNode&>(d.node());
      j["type"] = "affine";
      j["slope"] = to_json(n.slope());
      j["intercept"] = to_json(n.intercept());
      break;
    }
    case MapKind::finite: {
      const auto& n = static_cast<const FinitePLNode&>(d.node());
      j["type"] = "finite";
      j["pieces"] = to_json(n.pl());
      break;
    }
    case MapKind::periodic: {
      const auto& n = static_cast<const PeriodicNode&>(d.node());
      j["type"] = "periodic";
      j["period"] = to_json(n.period());
      j["pattern"] = to_json(n.pattern());
      break;
    }
    case MapKind::conjugate: {
      const auto& n = static_cast<const ConjugateNode&>(d.node());
      j["type"] = "conjugate";
      j["inner"] = to_json(n.inner());
      j["shift"] = to_json(n.shift());
      break;
    }
    case MapKind::lazy: {
      const auto& n = static_cast<const LazyBlockNode&>(d.node());
      j["type"] = "lazy";
      j["frame"] = to_json(n.frame());
      j["rule"] = rule_to_json(n.rule());
      break;
    }
    case MapKind::patched: {
      const auto& n = static_cast<const PatchedNode&>(d.node());
      j["type"] = "patched";
      json parts = json::array();
      for (const auto& part : n.parts())
        parts.push_back(json{{"region", to_json(part.region)}, {"map", to_json(part.map)}});
      j["parts"] = std::move(parts);
      break;
    }
    case MapKind::composed: {
      const auto& n = static_cast<const ComposedNode&>(d.node());
      j["type"] = "composed";
      json factors = json::array();
      for (const auto& [m, e] : n.factors())
        factors.push_back(json{{"map", to_json(m)}, {"exp", e}});
      j["factors"] = std::move(factors);
      break;
    }
  }
  return j;
}

inline MapDescriptor map_from_json(const json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "identity") return MapDescriptor::identity();
  if (type == "affine")
    return MapDescriptor::affine(rational_from_json(j.at("slope")),
                                 rational_from_json(j.at("intercept")));
  if (type == "finite") return MapDescriptor::finite(pl_from_json(j.at("pieces")));
  if (type == "periodic")
    return MapDescriptor::periodic(rational_from_json(j.at("period")),
                                   pl_from_json(j.at("pattern")));
  if (type == "conjugate")
    return MapDescriptor::conjugate_by_shift(map_from_json(j.at("inner")),
                                             rational_from_json(j.at("shift")));
  if (type == "lazy")
    return MapDescriptor::lazy(frame_from_json(j.at("frame")), rule_from_json(j.at("rule")));
  if (type == "patched") {
    std::vector<PatchPart> parts;
    for (const auto& p : j.at("parts"))
      parts.push_back(PatchPart{support_from_json(p.at("region")), map_from_json(p.at("map"))});
    return MapDescriptor::patched(std::move(parts));
  }
  if (type == "composed") {
    std::vector<std::pair<MapDescriptor, std::int64_t>> factors;
    for (const auto& f : j.at("factors"))
      factors.emplace_back(map_from_json(f.at("map")), f.at("exp").get<std::int64_t>());
    return MapDescriptor::composed(std::move(factors));
  }
  throw ParseError("unknown descriptor type '" + type + "'");
}

// --- words and actions -------------------------------------------------------------

inline json to_json(const Word& w) {
  json j;
  j["text"] = w.str();
  json arr = json::array();
  for (const auto& l : w.letters()) arr.push_back(json{{"gen", l.gen.str()}, {"exp", l.exp}});
  j["letters"] = std::move(arr);
  return j;
}

inline Word word_from_json(const json& j) {
  if (j.is_string()) return parse_word(j.get<std::string>());
  if (j.is_object() && j.contains("text")) return parse_word(j.at("text").get<std::string>());
  if (j.is_array()) {
    Word out;
    for (const auto& l : j) {
      Word letter = parse_word(l.at("gen").get<std::string>());
      if (letter.size() != 1) throw ParseError("bad word letter");
      int exp = l.at("exp").get<int>();
      if (exp != 1 && exp != -1) throw ParseError("letter exponent must be +-1");
      out = out.concat(exp == 1 ? letter : letter.inverse());
    }
    return out;
  }
  throw ParseError("expected word");
}

inline json to_json(const Action& a) {
  json gens = json::object();
  for (const auto& [id, d] : a.alphabet) gens[id.str()] = to_json(d);
  return json{{"generators", std::move(gens)}};
}

inline Action action_from_json(const json& j) {
  Action a;
  for (const auto& [key, val] : j.at("generators").items()) {
    Word w = parse_word(key);
    if (w.size() != 1 || w.letters()[0].exp != 1)
      throw ParseError("bad generator id '" + key + "'");
    a.alphabet[w.letters()[0].gen] = map_from_json(val);
  }
  return a;
}

// --- ping-pong artifacts --------------------------------------------------------------

inline json to_json(const PingPongTable& t) {
  json pairs = json::array();
  for (const auto& p : t.pairs)
    pairs.push_back(
        json{{"A", to_json(p.A)}, {"B", to_json(p.B)}, {"gen", p.gen.str()}});
  return json{{"action", to_json(t.action)}, {"pairs", std::move(pairs)}};
}

inline PingPongTable table_from_json(const json& j) {
  PingPongTable t;
  t.action = action_from_json(j.at("action"));
  for (const auto& p : j.at("pairs")) {
    Word w = parse_word(p.at("gen").get<std::string>());
    if (w.size() != 1) throw ParseError("bad table generator id");
    t.pairs.push_back(PingPongPair{blockset_from_json(p.at("A")), blockset_from_json(p.at("B")),
                                   w.letters()[0].gen});
  }
  return t;
}

inline json to_json(const PingPongCertificate& c, const PingPongTable& table) {
  json j;
  j["version"] = kVersion;
  j["table"] = to_json(table);
  json disj;
  disj["pass"] = c.disjoint.pass;
  if (c.disjoint.counterexample_block) disj["counterexample_block"] = *c.disjoint.counterexample_block;
  if (c.disjoint.offending_sets)
    disj["offending_sets"] = json::array(
        {c.disjoint.offending_sets->first, c.disjoint.offending_sets->second});
  j["disjointness"] = std::move(disj);
  json covers = json::array();
  for (const auto& cov : c.coverings) {
    json one;
    one["pass"] = cov.pass;
    one["complement_image_in_B"] = cov.complement_image_in_B;
    one["Bc_in_image_of_A"] = cov.Bc_in_image_of_A;
    one["method"] = cov.method;
    one["window_length"] = to_json(cov.window_length);
    if (cov.counterexample) one["counterexample"] = to_json(*cov.counterexample);
    covers.push_back(std::move(one));
  }
  j["coverings"] = std::move(covers);
  json base;
  base["found"] = c.base_point.found;
  if (c.base_point.point) base["point"] = to_json(*c.base_point.point);
  base["note"] = c.base_point.note;
  j["base_point"] = std::move(base);
  j["verdict"] = c.certified ? "certified" : "refuted";
  return j;
}

// --- direct products --------------------------------------------------------------------

inline json to_json(const FinSupportElement& g) {
  json coords = json::object();
  for (const auto& [a, p] : g.coords()) coords[std::to_string(a)] = p;
  return json{{"coords", std::move(coords)}};
}

inline FinSupportElement element_from_json(const json& j) {
  std::map<std::uint64_t, Perm> coords;
  for (const auto& [key, val] : j.at("coords").items()) {
    std::uint64_t a = 0;
    for (char c : key) {
      if (c < '0' || c > '9') throw ParseError("bad coordinate '" + key + "'");
      a = a * 10 + static_cast<std::uint64_t>(c - '0');
    }
    coords[a] = val.get<Perm>();
  }
  return FinSupportElement(std::move(coords));
}

inline json to_json(const std::vector<FinSupportElement>& set) {
  json arr = json::array();
  for (const auto& g : set) arr.push_back(to_json(g));
  return json{{"elements", std::move(arr)}};
}

inline std::vector<FinSupportElement> element_set_from_json(const json& j) {
  std::vector<FinSupportElement> out;
  for (const auto& e : j.at("elements")) out.push_back(element_from_json(e));
  return out;
}

// --- tuple registry ----------------------------------------------------------------------

inline json to_json(const OrderedTuple& t) {
  json arr = json::array();
  for (const auto& p : t.points) arr.push_back(to_json(p));
  return arr;
}
inline OrderedTuple tuple_from_json(const json& j) {
  std::vector<Rational> pts;
  for (const auto& p : j) pts.push_back(rational_from_json(p));
  return OrderedTuple(std::move(pts));
}

inline json to_json(const TupleIndexRegistry& r) {
  json arr = json::array();
  for (const auto& [key, idx] : r.assignments())
    arr.push_back(
        json{{"from", to_json(key.first)}, {"to", to_json(key.second)}, {"index", idx}});
  return json{{"next", r.next_index()}, {"assignments", std::move(arr)}};
}

inline TupleIndexRegistry registry_from_json(const json& j) {
  TupleIndexRegistry r;
  std::map<TupleIndexRegistry::Key, std::uint64_t> assignments;
  for (const auto& a : j.at("assignments")) {
    assignments.emplace(TupleIndexRegistry::Key{tuple_from_json(a.at("from")),
                                                 tuple_from_json(a.at("to"))},
                        a.at("index").get<std::uint64_t>());
  }
  r.restore(std::move(assignments), j.at("next").get<std::uint64_t>());
  return r;
}

}  // namespace ordfree
