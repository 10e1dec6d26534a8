#include "qpc/parse.hpp"

#include <cctype>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

namespace qpc {

namespace {

struct Tok {
  std::string text;
  int col;
};

std::vector<Tok> split_line(const std::string &line) {
  std::vector<Tok> out;
  size_t i = 0;
  while (i < line.size()) {
    if (std::isspace(static_cast<unsigned char>(line[i]))) {
      ++i;
      continue;
    }
    if (line[i] == '#') break;
    size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])))
      ++i;
    out.push_back({line.substr(start, i - start), static_cast<int>(start) + 1});
  }
  return out;
}

// WORD := atom ('*' atom)* ; atom := id '^' INT | id ; "id" = identity.
class WordScanner {
public:
  WordScanner(const PcPresentation &p, const std::string &s, int line, int col0)
      : p_(p), s_(s), line_(line), col0_(col0) {}

  Word parse() {
    Word w;
    skip_ws();
    if (done()) throw err("empty word");
    if (peek_ident() == "id") {
      take_ident();
      skip_ws();
      if (!done()) throw err("trailing input after 'id'");
      return w;
    }
    for (;;) {
      w.push_back(parse_atom());
      skip_ws();
      if (done()) break;
      if (s_[pos_] != '*') throw err("expected '*' between atoms");
      ++pos_;
      skip_ws();
    }
    return free_reduce(w);
  }

private:
  Letter parse_atom() {
    std::string name = take_ident();
    if (name.empty()) throw err("expected generator name");
    int g = p_.gen_index(name);
    if (g < 0) throw err("unknown generator '" + name + "'");
    Int e = 1;
    skip_ws();
    if (!done() && s_[pos_] == '^') {
      ++pos_;
      skip_ws();
      e = take_int();
      if (e == 0) throw err("zero exponent");
    }
    return Letter(g, e);
  }

  bool done() const { return pos_ >= s_.size(); }
  void skip_ws() {
    while (!done() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  std::string peek_ident() {
    size_t q = pos_;
    std::string r;
    while (q < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[q])) || s_[q] == '_'))
      r += s_[q++];
    return r;
  }
  std::string take_ident() {
    std::string r = peek_ident();
    pos_ += r.size();
    return r;
  }
  Int take_int() {
    size_t start = pos_;
    if (!done() && (s_[pos_] == '-' || s_[pos_] == '+')) ++pos_;
    while (!done() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (pos_ == start || (pos_ == start + 1 && !std::isdigit(static_cast<unsigned char>(s_[start]))))
      throw err("expected integer");
    return Int(s_.substr(start, pos_ - start));
  }
  ParseError err(const std::string &m) const {
    return ParseError(m, line_, col0_ + static_cast<int>(pos_));
  }

  const PcPresentation &p_;
  const std::string &s_;
  size_t pos_ = 0;
  int line_, col0_;
};

Word json_word(const PcPresentation &p, const nlohmann::json &j,
               const char *what) {
  Word w;
  if (!j.is_array()) throw ParseError(std::string(what) + ": word must be an array");
  for (const auto &pair : j) {
    if (!pair.is_array() || pair.size() != 2)
      throw ParseError(std::string(what) + ": word entries are [index, exponent]");
    int g = pair[0].get<int>();
    Int e;
    if (pair[1].is_string())
      e = Int(pair[1].get<std::string>());
    else
      e = Int(pair[1].get<long>());
    if (g < 1 || g > p.n())
      throw ParseError(std::string(what) + ": generator index out of range");
    if (e == 0) throw ParseError(std::string(what) + ": zero exponent");
    w.emplace_back(g, e);
  }
  return free_reduce(w);
}

nlohmann::json word_json(const Word &w) {
  nlohmann::json arr = nlohmann::json::array();
  for (const Letter &l : w) {
    nlohmann::json pair = nlohmann::json::array();
    pair.push_back(l.gen);
    if (l.exp.fits_slong_p())
      pair.push_back(l.exp.get_si());
    else
      pair.push_back(l.exp.get_str());
    arr.push_back(pair);
  }
  return arr;
}

Int json_int(const nlohmann::json &j) {
  if (j.is_string()) return Int(j.get<std::string>());
  return Int(j.get<long>());
}

ParsedDocument parse_json(const std::string &text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error &e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("JSON document must be an object");
  std::vector<std::string> gens;
  if (doc.contains("gens"))
    for (const auto &g : doc["gens"]) gens.push_back(g.get<std::string>());
  PcPresentation p(static_cast<int>(gens.size()));
  if (doc.contains("group")) p.set_group_name(doc["group"].get<std::string>());
  std::set<std::string> seen;
  for (size_t i = 0; i < gens.size(); ++i) {
    if (!seen.insert(gens[i]).second)
      throw ParseError("duplicate generator name '" + gens[i] + "'");
    p.set_name(static_cast<int>(i) + 1, gens[i]);
  }
  auto gen_of = [&](const nlohmann::json &j) {
    int g = p.gen_index(j.get<std::string>());
    if (g < 0) throw ParseError("unknown generator '" + j.get<std::string>() + "'");
    return g;
  };
  if (doc.contains("pows")) {
    for (const auto &e : doc["pows"]) {
      int g = gen_of(e.at("gen"));
      if (p.has_power(g)) throw ParseError("duplicate power relation for " + p.name(g));
      Int ex = json_int(e.at("exp"));
      if (ex < 1) throw ParseError("power exponent must be >= 1");
      p.set_power(g, ex, json_word(p, e.at("rhs"), "pow"));
    }
  }
  if (doc.contains("conjs")) {
    for (const auto &e : doc["conjs"]) {
      int i = gen_of(e.at("target")), j = gen_of(e.at("by"));
      if (j >= i) throw ParseError("conjugator index must be below target index");
      if (p.has_conj(i, j)) throw ParseError("duplicate conjugation relation");
      p.set_conj(i, j, json_word(p, e.at("rhs"), "conj"));
    }
  }
  if (doc.contains("cinvs")) {
    for (const auto &e : doc["cinvs"]) {
      int i = gen_of(e.at("target")), j = gen_of(e.at("by"));
      if (j >= i) throw ParseError("conjugator index must be below target index");
      if (p.has_power(j)) throw ParseError("cinv conjugator must lie outside the power index set");
      p.set_conj_inv(i, j, json_word(p, e.at("rhs"), "cinv"));
    }
  }
  ParsedDocument out;
  if (doc.contains("tails")) {
    for (const auto &t : doc["tails"])
      out.tails.push_back({t.at("name").get<std::string>(), json_int(t.at("order"))});
  }
  // Right-hand-side index ordering etc.
  try {
    p.validate();
  } catch (const InvalidArgument &e) {
    throw ParseError(e.what());
  }
  out.presentation = std::move(p);
  return out;
}

ParsedDocument parse_text(const std::string &text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  bool in_group = false, ended = false;
  std::vector<std::string> gen_names;
  std::string group_name = "G";
  struct PowDecl { std::string gen; Int e; std::string rhs; int line, col; };
  struct ConjDecl { std::string tgt, by, rhs; bool inv; int line, col; };
  std::vector<PowDecl> pows;
  std::vector<ConjDecl> conjs;
  std::vector<std::pair<std::string, Int>> tails;
  bool saw_gens = false;

  while (std::getline(in, line)) {
    ++lineno;
    auto toks = split_line(line);
    if (toks.empty()) continue;
    const std::string &kw = toks[0].text;
    if (ended) throw ParseError("content after 'end'", lineno, toks[0].col);
    if (kw == "group") {
      if (toks.size() != 2) throw ParseError("usage: group NAME", lineno, toks[0].col);
      group_name = toks[1].text;
      in_group = true;
    } else if (kw == "gens") {
      saw_gens = true;
      for (size_t i = 1; i < toks.size(); ++i) gen_names.push_back(toks[i].text);
    } else if (kw == "pow" || kw == "conj" || kw == "cinv" || kw == "tails") {
      if (!saw_gens) throw ParseError("declaration before 'gens'", lineno, toks[0].col);
      // Re-scan the raw remainder of the line after the := for words.
      if (kw == "tails") {
        if ((toks.size() - 1) % 2 != 0)
          throw ParseError("usage: tails NAME ORDER ...", lineno, toks[0].col);
        for (size_t i = 1; i + 1 < toks.size(); i += 2)
          tails.emplace_back(toks[i].text, Int(toks[i + 1].text));
        continue;
      }
      size_t assign = line.find(":=");
      if (assign == std::string::npos)
        throw ParseError("missing ':='", lineno, static_cast<int>(line.size()));
      std::string head = line.substr(0, assign);
      std::string rhs = line.substr(assign + 2);
      auto htoks = split_line(head);
      // head forms: pow id ^ E    |   conj id ^ id   |   cinv id ^ id
      // also accept the compact id^E / id^id spelling
      std::vector<std::string> parts;
      for (size_t i = 1; i < htoks.size(); ++i) {
        std::string t = htoks[i].text;
        size_t c;
        while ((c = t.find('^')) != std::string::npos) {
          if (c > 0) parts.push_back(t.substr(0, c));
          parts.push_back("^");
          t = t.substr(c + 1);
        }
        if (!t.empty()) parts.push_back(t);
      }
      if (parts.size() != 3 || parts[1] != "^")
        throw ParseError("usage: " + kw + " id ^ X := WORD", lineno, toks[0].col);
      if (kw == "pow")
        pows.push_back({parts[0], Int(parts[2]), rhs, lineno, static_cast<int>(assign) + 3});
      else
        conjs.push_back({parts[0], parts[2], rhs, kw == "cinv", lineno,
                         static_cast<int>(assign) + 3});
    } else if (kw == "end") {
      ended = true;
    } else {
      throw ParseError("unknown declaration '" + kw + "'", lineno, toks[0].col);
    }
  }
  if (in_group && !ended) throw ParseError("missing 'end'", lineno, 1);

  PcPresentation p(static_cast<int>(gen_names.size()));
  p.set_group_name(group_name);
  std::set<std::string> seen;
  for (size_t i = 0; i < gen_names.size(); ++i) {
    if (!seen.insert(gen_names[i]).second)
      throw ParseError("duplicate generator name '" + gen_names[i] + "'");
    p.set_name(static_cast<int>(i) + 1, gen_names[i]);
  }
  auto idx = [&](const std::string &name, int line_, int col_) {
    int g = p.gen_index(name);
    if (g < 0) throw ParseError("unknown generator '" + name + "'", line_, col_);
    return g;
  };
  for (const auto &d : pows) {
    int g = idx(d.gen, d.line, 1);
    if (d.e < 1) throw ParseError("power exponent must be >= 1", d.line, 1);
    if (p.has_power(g))
      throw ParseError("duplicate power relation for " + d.gen, d.line, 1);
    Word w = WordScanner(p, d.rhs, d.line, d.col).parse();
    for (const Letter &l : w)
      if (l.gen <= g)
        throw ParseError("power right-hand side must use strictly larger indices",
                         d.line, d.col);
    p.set_power(g, d.e, w);
  }
  for (const auto &d : conjs) {
    int i = idx(d.tgt, d.line, 1), j = idx(d.by, d.line, 1);
    if (j >= i)
      throw ParseError("conjugator index must be below target index", d.line, 1);
    Word w = WordScanner(p, d.rhs, d.line, d.col).parse();
    for (const Letter &l : w)
      if (l.gen <= j)
        throw ParseError("conjugation right-hand side must use strictly larger indices",
                         d.line, d.col);
    if (d.inv) {
      if (p.has_power(j))
        throw ParseError("cinv conjugator must lie outside the power index set", d.line, 1);
      if (p.has_conj_inv(i, j))
        throw ParseError("duplicate cinv relation", d.line, 1);
      p.set_conj_inv(i, j, w);
    } else {
      if (p.has_conj(i, j))
        throw ParseError("duplicate conjugation relation", d.line, 1);
      p.set_conj(i, j, w);
    }
  }
  ParsedDocument out;
  out.presentation = std::move(p);
  for (auto &[name, order] : tails) out.tails.push_back({name, order});
  return out;
}

} // namespace

ParsedDocument parse_presentation(const std::string &text) {
  for (char ch : text) {
    if (std::isspace(static_cast<unsigned char>(ch))) continue;
    if (ch == '{') return parse_json(text);
    break;
  }
  return parse_text(text);
}

std::string word_to_string(const PcPresentation &p, const Word &w) {
  if (w.empty()) return "id";
  std::string out;
  for (size_t i = 0; i < w.size(); ++i) {
    if (i) out += "*";
    out += p.name(w[i].gen);
    if (w[i].exp != 1) out += "^" + w[i].exp.get_str();
  }
  return out;
}

std::string emit_text(const PcPresentation &p, const std::vector<TailInfo> &tails) {
  std::ostringstream os;
  os << "group " << p.group_name() << "\n";
  os << "gens";
  for (int i = 1; i <= p.n(); ++i) os << " " << p.name(i);
  os << "\n";
  for (int i = 1; i <= p.n(); ++i)
    if (p.has_power(i))
      os << "pow " << p.name(i) << " ^ " << p.exponent(i).get_str() << " := "
         << word_to_string(p, p.power_rhs(i)) << "\n";
  for (int i = 2; i <= p.n(); ++i)
    for (int j = 1; j < i; ++j)
      if (p.has_conj(i, j))
        os << "conj " << p.name(i) << " ^ " << p.name(j) << " := "
           << word_to_string(p, p.conj(i, j)) << "\n";
  for (int i = 2; i <= p.n(); ++i)
    for (int j = 1; j < i; ++j)
      if (auto w = p.conj_inv(i, j))
        os << "cinv " << p.name(i) << " ^ " << p.name(j) << " := "
           << word_to_string(p, *w) << "\n";
  if (!tails.empty()) {
    os << "tails";
    for (const auto &t : tails) os << " " << t.name << " " << t.order.get_str();
    os << "\n";
  }
  os << "end\n";
  return os.str();
}

std::string emit_json(const PcPresentation &p, const std::vector<TailInfo> &tails,
                      bool with_provenance) {
  nlohmann::json doc;
  doc["group"] = p.group_name();
  doc["gens"] = nlohmann::json::array();
  for (int i = 1; i <= p.n(); ++i) doc["gens"].push_back(p.name(i));
  doc["pows"] = nlohmann::json::array();
  for (int i = 1; i <= p.n(); ++i)
    if (p.has_power(i)) {
      nlohmann::json e;
      e["gen"] = p.name(i);
      if (p.exponent(i).fits_slong_p())
        e["exp"] = p.exponent(i).get_si();
      else
        e["exp"] = p.exponent(i).get_str();
      e["rhs"] = word_json(p.power_rhs(i));
      doc["pows"].push_back(e);
    }
  doc["conjs"] = nlohmann::json::array();
  for (int i = 2; i <= p.n(); ++i)
    for (int j = 1; j < i; ++j)
      if (p.has_conj(i, j)) {
        nlohmann::json e;
        e["target"] = p.name(i);
        e["by"] = p.name(j);
        e["rhs"] = word_json(p.conj(i, j));
        doc["conjs"].push_back(e);
      }
  doc["cinvs"] = nlohmann::json::array();
  for (int i = 2; i <= p.n(); ++i)
    for (int j = 1; j < i; ++j)
      if (auto w = p.conj_inv(i, j)) {
        nlohmann::json e;
        e["target"] = p.name(i);
        e["by"] = p.name(j);
        e["rhs"] = word_json(*w);
        doc["cinvs"].push_back(e);
      }
  if (!tails.empty()) {
    doc["tails"] = nlohmann::json::array();
    for (const auto &t : tails) {
      nlohmann::json e;
      e["name"] = t.name;
      if (t.order.fits_slong_p())
        e["order"] = t.order.get_si();
      else
        e["order"] = t.order.get_str();
      doc["tails"].push_back(e);
    }
  }
  if (with_provenance) {
    bool any = false;
    for (int i = 1; i <= p.n(); ++i)
      if (!p.provenance(i).empty()) any = true;
    if (any) {
      doc["provenance"] = nlohmann::json::array();
      for (int i = 1; i <= p.n(); ++i) {
        nlohmann::json e;
        e["gen"] = p.name(i);
        e["from"] = p.provenance(i);
        doc["provenance"].push_back(e);
      }
    }
  }
  return doc.dump(2) + "\n";
}

Word parse_word(const PcPresentation &p, const std::string &text) {
  return WordScanner(p, text, 1, 1).parse();
}

namespace {

// expr := term ('*' term)* ; term := factor ('^' suffix)* ;
// factor := id | '(' expr ')' | '[' expr ',' expr ']' ; suffix := INT | factor
class ExprScanner {
public:
  ExprScanner(const PcPresentation &p, const std::string &s) : p_(p), s_(s) {}

  ExprPtr parse() {
    ExprPtr e = parse_expr();
    skip_ws();
    if (!done()) throw ParseError("trailing input in expression", 1, static_cast<int>(pos_) + 1);
    return e;
  }

private:
  ExprPtr parse_expr() {
    std::vector<ExprPtr> parts{parse_term()};
    for (;;) {
      skip_ws();
      if (done() || s_[pos_] != '*') break;
      ++pos_;
      parts.push_back(parse_term());
    }
    return parts.size() == 1 ? parts[0] : Expr::make_prod(std::move(parts));
  }

  ExprPtr parse_term() {
    ExprPtr base = parse_factor();
    for (;;) {
      skip_ws();
      if (done() || s_[pos_] != '^') break;
      ++pos_;
      skip_ws();
      if (!done() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) ||
                      s_[pos_] == '-' || s_[pos_] == '+')) {
        base = Expr::make_pow(base, take_int());
      } else {
        base = Expr::make_conj(base, parse_factor());
      }
    }
    return base;
  }

  ExprPtr parse_factor() {
    skip_ws();
    if (done()) throw ParseError("unexpected end of expression", 1, static_cast<int>(pos_) + 1);
    if (s_[pos_] == '(') {
      ++pos_;
      ExprPtr e = parse_expr();
      skip_ws();
      expect(')');
      return e;
    }
    if (s_[pos_] == '[') {
      ++pos_;
      ExprPtr a = parse_expr();
      skip_ws();
      expect(',');
      ExprPtr b = parse_expr();
      skip_ws();
      expect(']');
      return Expr::make_comm(a, b);
    }
    std::string name = take_ident();
    if (name.empty())
      throw ParseError("expected generator name", 1, static_cast<int>(pos_) + 1);
    if (name == "id") return Expr::make_atom(Word());
    int g = p_.gen_index(name);
    if (g < 0) throw ParseError("unknown generator '" + name + "'", 1,
                                static_cast<int>(pos_) + 1);
    return Expr::make_gen(g);
  }

  void expect(char c) {
    if (done() || s_[pos_] != c)
      throw ParseError(std::string("expected '") + c + "'", 1, static_cast<int>(pos_) + 1);
    ++pos_;
  }
  bool done() const { return pos_ >= s_.size(); }
  void skip_ws() {
    while (!done() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  std::string take_ident() {
    std::string r;
    while (!done() &&
           (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
      r += s_[pos_++];
    return r;
  }
  Int take_int() {
    size_t start = pos_;
    if (!done() && (s_[pos_] == '-' || s_[pos_] == '+')) ++pos_;
    while (!done() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (pos_ == start) throw ParseError("expected integer", 1, static_cast<int>(pos_) + 1);
    return Int(s_.substr(start, pos_ - start));
  }

  const PcPresentation &p_;
  const std::string &s_;
  size_t pos_ = 0;
};

} // namespace

ExprPtr parse_expression(const PcPresentation &p, const std::string &text) {
  return ExprScanner(p, text).parse();
}

} // namespace qpc
