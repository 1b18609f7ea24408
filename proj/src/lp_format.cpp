#include "bhca/lp_format.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <unordered_map>

#include "bhca/errors.hpp"

namespace bhca {

namespace {

constexpr std::size_t kTermsPerLine = 8;

std::string number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_terms(std::string& out, const std::vector<Term>& terms, const LinearProgram& lp) {
    if (terms.empty()) {
        out += " 0 " + lp.columns.front().name;
        return;
    }
    for (std::size_t k = 0; k < terms.size(); ++k) {
        if (k > 0 && k % kTermsPerLine == 0) out += "\n  ";
        const double c = terms[k].coef;
        out += c < 0 ? " - " : (k == 0 ? " " : " + ");
        if (std::abs(c) != 1.0) out += number(std::abs(c)) + ' ';
        out += lp.columns[terms[k].column].name;
    }
}

const char* sense_text(Sense s) {
    switch (s) {
        case Sense::less_equal: return "<=";
        case Sense::greater_equal: return ">=";
        case Sense::equal: return "=";
    }
    return "?";
}

std::string lower_case(std::string_view s) {
    std::string out(s);
    for (auto& ch : out) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    return out;
}

enum class Section { none, objective, constraints, bounds, binaries, generals, end };

Section section_keyword(std::string_view line, bool& minimize) {
    std::string s = lower_case(line);
    s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }), s.end());
    if (s == "maximize" || s == "maximise" || s == "max") return Section::objective;
    if (s == "minimize" || s == "minimise" || s == "min") {
        minimize = true;
        return Section::objective;
    }
    if (s == "subjectto" || s == "st" || s == "s.t." || s == "such that" || s == "suchthat") return Section::constraints;
    if (s == "bounds" || s == "bound") return Section::bounds;
    if (s == "binaries" || s == "binary" || s == "bin") return Section::binaries;
    if (s == "generals" || s == "general" || s == "gen") return Section::generals;
    if (s == "end") return Section::end;
    return Section::none;
}

struct Token {
    enum Kind { name, number, plus, minus, colon, le, ge, eq } kind;
    std::string text;
    double value = 0;
    int line = 0;
};

bool name_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool name_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '[' || c == ']'; }

void tokenize(std::string_view line, int line_no, std::vector<Token>& out) {
    std::size_t i = 0;
    while (i < line.size()) {
        const char c = line[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
        } else if (name_start(c)) {
            std::size_t j = i;
            while (j < line.size() && name_char(line[j])) ++j;
            std::string word(line.substr(i, j - i));
            const std::string low = lower_case(word);
            if (low == "inf" || low == "infinity") {
                out.push_back({Token::number, word, kInf, line_no});
            } else {
                out.push_back({Token::name, word, 0, line_no});
            }
            i = j;
        } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            double v = 0;
            auto [end, ec] = std::from_chars(line.data() + i, line.data() + line.size(), v);
            if (ec != std::errc()) throw ParseError("bad number", line_no);
            const std::size_t j = end - line.data();
            out.push_back({Token::number, std::string(line.substr(i, j - i)), v, line_no});
            i = j;
        } else if (c == '+' || c == '-') {
            out.push_back({c == '+' ? Token::plus : Token::minus, std::string(1, c), 0, line_no});
            ++i;
        } else if (c == ':') {
            out.push_back({Token::colon, ":", 0, line_no});
            ++i;
        } else if (c == '<' || c == '>' || c == '=') {
            std::size_t j = i + 1;
            if (j < line.size() && (line[j] == '=' || line[j] == '<' || line[j] == '>')) ++j;
            const std::string op(line.substr(i, j - i));
            Token::Kind kind = Token::eq;
            if (op.find('<') != std::string::npos) kind = Token::le;
            if (op.find('>') != std::string::npos) kind = Token::ge;
            out.push_back({kind, op, 0, line_no});
            i = j;
        } else {
            throw ParseError(std::string("unexpected character '") + c + "'", line_no);
        }
    }
}

class Builder {
public:
    int column(const std::string& name) {
        auto [it, inserted] = index_.try_emplace(name, static_cast<int>(lp.columns.size()));
        if (inserted) {
            lp.columns.push_back({name, 0.0, kInf, false});
            explicit_bound_.push_back(false);
        }
        return it->second;
    }

    LinearProgram lp;
    std::unordered_map<std::string, int> index_;
    std::vector<bool> explicit_bound_;
};

// Parses `[label:] terms [sense rhs]` starting at pos; returns the position after it.
std::size_t parse_expression(const std::vector<Token>& toks, std::size_t pos, Builder& b, std::string& label,
                             std::vector<Term>& terms, bool& has_sense, Sense& sense, double& rhs) {
    label.clear();
    terms.clear();
    has_sense = false;
    if (pos + 1 < toks.size() && toks[pos].kind == Token::name && toks[pos + 1].kind == Token::colon) {
        label = toks[pos].text;
        pos += 2;
    }
    double sign = 1;
    double coef = 1;
    bool have_coef = false;
    bool expect_term = true;
    bool pending_sign = false;
    while (pos < toks.size()) {
        const Token& t = toks[pos];
        if (t.kind == Token::plus || t.kind == Token::minus) {
            if (have_coef) throw ParseError("coefficient without a variable", t.line);
            sign = t.kind == Token::minus ? -sign : sign;
            expect_term = true;
            pending_sign = true;
            ++pos;
        } else if (t.kind == Token::number) {
            if (have_coef) throw ParseError("two numbers in a row", t.line);
            coef = t.value;
            have_coef = true;
            ++pos;
        } else if (t.kind == Token::name) {
            if (pos + 1 < toks.size() && toks[pos + 1].kind == Token::colon) break;  // next labelled row
            if (!expect_term) break;  // next unlabelled row begins
            terms.push_back({b.column(t.text), sign * coef});
            sign = 1;
            coef = 1;
            have_coef = false;
            expect_term = false;
            pending_sign = false;
            ++pos;
        } else if (t.kind == Token::le || t.kind == Token::ge || t.kind == Token::eq) {
            if (have_coef) throw ParseError("constant terms on the left-hand side are not supported", t.line);
            if (pending_sign) throw ParseError("sign without a term", t.line);
            has_sense = true;
            sense = t.kind == Token::le ? Sense::less_equal : t.kind == Token::ge ? Sense::greater_equal : Sense::equal;
            ++pos;
            double rsign = 1;
            while (pos < toks.size() && (toks[pos].kind == Token::plus || toks[pos].kind == Token::minus)) {
                if (toks[pos].kind == Token::minus) rsign = -rsign;
                ++pos;
            }
            if (pos >= toks.size() || toks[pos].kind != Token::number) throw ParseError("missing right-hand side", t.line);
            rhs = rsign * toks[pos].value;
            ++pos;
            return pos;
        } else {
            throw ParseError("unexpected '" + t.text + "'", t.line);
        }
    }
    if (have_coef) throw ParseError("coefficient without a variable", toks[pos - 1].line);
    if (pending_sign) throw ParseError("sign without a term", toks[pos - 1].line);
    return pos;
}

void parse_bound_line(const std::vector<Token>& toks, Builder& b) {
    const int line = toks.front().line;
    auto signed_number = [&](std::size_t& pos) {
        double s = 1;
        while (pos < toks.size() && (toks[pos].kind == Token::plus || toks[pos].kind == Token::minus)) {
            if (toks[pos].kind == Token::minus) s = -s;
            ++pos;
        }
        if (pos >= toks.size() || toks[pos].kind != Token::number) throw ParseError("expected a bound value", line);
        return s * toks[pos++].value;
    };
    auto set = [&](int j, Sense sense, double v) {
        auto& col = b.lp.columns[j];
        if (sense == Sense::less_equal) col.upper = v;
        if (sense == Sense::greater_equal) col.lower = v;
        if (sense == Sense::equal) col.lower = col.upper = v;
        b.explicit_bound_[j] = true;
    };
    auto sense_of = [&](const Token& t) {
        if (t.kind == Token::le) return Sense::less_equal;
        if (t.kind == Token::ge) return Sense::greater_equal;
        if (t.kind == Token::eq) return Sense::equal;
        throw ParseError("expected a comparison in bound", line);
    };
    auto flip = [](Sense s) {
        return s == Sense::less_equal ? Sense::greater_equal : s == Sense::greater_equal ? Sense::less_equal : s;
    };

    std::size_t pos = 0;
    if (toks[0].kind == Token::name) {
        const int j = b.column(toks[0].text);
        if (toks.size() == 2 && toks[1].kind == Token::name && lower_case(toks[1].text) == "free") {
            b.lp.columns[j].lower = -kInf;
            b.lp.columns[j].upper = kInf;
            b.explicit_bound_[j] = true;
            return;
        }
        if (toks.size() < 3) throw ParseError("incomplete bound", line);
        pos = 2;
        const Sense s = sense_of(toks[1]);
        set(j, s, signed_number(pos));
    } else {
        const double v = signed_number(pos);
        if (pos + 1 >= toks.size()) throw ParseError("incomplete bound", line);
        const Sense s1 = flip(sense_of(toks[pos]));
        if (toks[pos + 1].kind != Token::name) throw ParseError("expected a variable in bound", line);
        const int j = b.column(toks[pos + 1].text);
        set(j, s1, v);
        pos += 2;
        if (pos < toks.size()) {
            const Sense s2 = sense_of(toks[pos]);
            ++pos;
            set(j, s2, signed_number(pos));
        }
    }
    if (pos != toks.size()) throw ParseError("trailing tokens in bound", line);
}

}  // namespace

std::string tag_from_name(std::string_view name) {
    std::string head(name.substr(0, name.find('_')));
    if (head.size() >= 3 && std::isdigit(static_cast<unsigned char>(head[head.size() - 2])) &&
        std::islower(static_cast<unsigned char>(head.back()))) {
        head.insert(head.size() - 1, "-");
    }
    return head;
}

std::string export_lp(const LinearProgram& lp) {
    if (lp.columns.empty()) throw StructuralError("cannot export a program without columns");
    std::string out = "\\ BH-CA planning model\nMaximize\n obj:";
    write_terms(out, lp.objective, lp);
    out += "\nSubject To\n";
    for (const auto& row : lp.rows) {
        out += ' ' + row.name + ':';
        write_terms(out, row.terms, lp);
        out += ' ';
        out += sense_text(row.sense);
        out += ' ' + number(row.rhs) + '\n';
    }
    out += "Bounds\n";
    for (const auto& col : lp.columns) {
        const bool default_bounds = col.binary ? (col.lower == 0 && col.upper == 1) : (col.lower == 0 && col.upper == kInf);
        if (default_bounds) continue;
        if (col.lower == -kInf && col.upper == kInf) {
            out += ' ' + col.name + " free\n";
        } else if (col.lower == col.upper) {
            out += ' ' + col.name + " = " + number(col.lower) + '\n';
        } else if (col.upper == kInf) {
            out += ' ' + col.name + " >= " + number(col.lower) + '\n';
        } else {
            out += ' ' + (col.lower == -kInf ? std::string("-inf") : number(col.lower)) + " <= " + col.name + " <= " +
                   number(col.upper) + '\n';
        }
    }
    out += "Binaries\n";
    for (const auto& col : lp.columns)
        if (col.binary) out += ' ' + col.name + '\n';
    out += "End\n";
    return out;
}

std::string export_lp(const ModelInstance& model) { return export_lp(model.program); }

LinearProgram parse_lp(std::string_view text) {
    Builder b;
    Section section = Section::none;
    bool minimize = false;
    std::vector<Token> objective_tokens, row_tokens;
    std::vector<std::vector<Token>> bound_lines;
    std::vector<std::pair<std::string, int>> binary_names;

    int line_no = 0;
    std::size_t start = 0;
    while (start <= text.size() && section != Section::end) {
        std::size_t stop = text.find('\n', start);
        if (stop == std::string_view::npos) stop = text.size();
        std::string_view line = text.substr(start, stop - start);
        start = stop + 1;
        ++line_no;
        if (auto cut = line.find('\\'); cut != std::string_view::npos) line = line.substr(0, cut);
        if (line.find_first_not_of(" \t\r") == std::string_view::npos) {
            if (stop == text.size()) break;
            continue;
        }

        const Section next = section_keyword(line, minimize);
        if (next != Section::none) {
            if (next == Section::generals) throw ParseError("general integer columns are not supported", line_no);
            section = next;
            continue;
        }
        switch (section) {
            case Section::none: throw ParseError("content before the objective section", line_no);
            case Section::objective: tokenize(line, line_no, objective_tokens); break;
            case Section::constraints: tokenize(line, line_no, row_tokens); break;
            case Section::bounds: {
                std::vector<Token> toks;
                tokenize(line, line_no, toks);
                bound_lines.push_back(std::move(toks));
                break;
            }
            case Section::binaries: {
                std::vector<Token> toks;
                tokenize(line, line_no, toks);
                for (const auto& t : toks) {
                    if (t.kind != Token::name) throw ParseError("expected a variable name in Binaries", line_no);
                    binary_names.emplace_back(t.text, line_no);
                }
                break;
            }
            default: break;
        }
        if (stop == text.size()) break;
    }
    if (section != Section::end) throw ParseError("missing End", line_no);

    std::string label;
    std::vector<Term> terms;
    bool has_sense = false;
    Sense sense = Sense::less_equal;
    double rhs = 0;
    if (!objective_tokens.empty()) {
        const std::size_t used = parse_expression(objective_tokens, 0, b, label, terms, has_sense, sense, rhs);
        if (has_sense || used != objective_tokens.size()) throw ParseError("malformed objective", objective_tokens.front().line);
        for (auto& t : terms) t.coef = minimize ? -t.coef : t.coef;
        b.lp.objective = normalize_terms(terms);
    }
    std::size_t pos = 0;
    int unnamed = 0;
    while (pos < row_tokens.size()) {
        const int line = row_tokens[pos].line;
        pos = parse_expression(row_tokens, pos, b, label, terms, has_sense, sense, rhs);
        if (!has_sense) throw ParseError("constraint without a comparison", line);
        if (label.empty()) label = "R" + std::to_string(++unnamed);
        b.lp.add_row(terms, sense, rhs, tag_from_name(label), label);
    }
    for (const auto& toks : bound_lines) parse_bound_line(toks, b);
    for (const auto& [name, line] : binary_names) {
        const int j = b.column(name);
        b.lp.columns[j].binary = true;
        if (!b.explicit_bound_[j]) {
            b.lp.columns[j].lower = 0;
            b.lp.columns[j].upper = 1;
        }
    }
    return std::move(b.lp);
}

LinearProgram rebuild_program(const LinearProgram& parsed, const std::vector<std::string>& names) {
    if (names.size() != parsed.columns.size()) {
        throw StructuralError("parsed program has " + std::to_string(parsed.columns.size()) + " columns, expected " +
                              std::to_string(names.size()));
    }
    std::unordered_map<std::string, int> target;
    for (int j = 0; j < static_cast<int>(names.size()); ++j) target.emplace(names[j], j);
    std::vector<int> map(parsed.columns.size());
    LinearProgram out;
    out.columns.resize(names.size());
    for (int j = 0; j < parsed.num_columns(); ++j) {
        auto it = target.find(parsed.columns[j].name);
        if (it == target.end()) throw StructuralError("unexpected column '" + parsed.columns[j].name + "'");
        map[j] = it->second;
        out.columns[it->second] = parsed.columns[j];
    }
    auto remap = [&](std::vector<Term> terms) {
        for (auto& t : terms) t.column = map[t.column];
        return normalize_terms(std::move(terms));
    };
    out.objective = remap(parsed.objective);
    for (const auto& row : parsed.rows) out.rows.push_back({remap(row.terms), row.sense, row.rhs, row.tag, row.name});
    return out;
}

}  // namespace bhca
