// SPDX-License-Identifier: Apache-2.0
#include "evaluate.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <regex>

#include <json.hpp>

#include "core/error.hpp"

namespace agentnet::bench {
namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

void replace_all(std::string& s, std::string_view from, std::string_view to) {
    if (from.empty())
        return;
    std::size_t pos = 0;
    while ((pos = s.find(from, pos)) != std::string::npos) {
        s.replace(pos, from.size(), to);
        pos += to.size();
    }
}

bool starts_with_ci(std::string_view s, std::string_view prefix) {
    if (s.size() < prefix.size())
        return false;
    for (std::size_t i = 0; i < prefix.size(); ++i)
        if (std::tolower(static_cast<unsigned char>(s[i])) != std::tolower(static_cast<unsigned char>(prefix[i])))
            return false;
    return true;
}

// Index one past the brace group opening at `open`, or npos.
std::size_t match_brace(std::string_view s, std::size_t open) {
    int depth = 0;
    for (std::size_t i = open; i < s.size(); ++i) {
        if (s[i] == '{')
            ++depth;
        else if (s[i] == '}' && --depth == 0)
            return i + 1;
    }
    return std::string_view::npos;
}

std::string last_boxed(const std::string& s) {
    for (std::string_view tag : {"\\boxed", "\\fbox"}) {
        const auto at = s.rfind(tag);
        if (at == std::string::npos)
            continue;
        auto open = s.find('{', at);
        if (open == std::string::npos)
            continue;
        const auto close = match_brace(s, open);
        if (close == std::string::npos)
            continue;
        return s.substr(open + 1, close - open - 2);
    }
    return s;
}

// Replaces \cmd{X} by X for the given command.
void unwrap(std::string& s, std::string_view cmd) {
    std::size_t at;
    while ((at = s.find(cmd)) != std::string::npos) {
        const auto open = at + cmd.size();
        if (open >= s.size() || s[open] != '{') {
            s.erase(at, cmd.size());
            continue;
        }
        const auto close = match_brace(s, open);
        if (close == std::string::npos) {
            s.erase(at, cmd.size());
            continue;
        }
        s = s.substr(0, at) + s.substr(open + 1, close - open - 2) + s.substr(close);
    }
}

// Reads one fraction argument: a brace group or a single character.
bool frac_arg(const std::string& s, std::size_t& pos, std::string& out) {
    if (pos >= s.size())
        return false;
    if (s[pos] == '{') {
        const auto close = match_brace(s, pos);
        if (close == std::string::npos)
            return false;
        out = s.substr(pos + 1, close - pos - 2);
        pos = close;
        return true;
    }
    out = s.substr(pos, 1);
    ++pos;
    return true;
}

void rewrite_fracs(std::string& s) {
    std::size_t at;
    while ((at = s.rfind("\\frac")) != std::string::npos) {
        std::size_t pos = at + 5;
        std::string num, den;
        if (!frac_arg(s, pos, num) || !frac_arg(s, pos, den)) {
            s.erase(at, 5);
            continue;
        }
        s = s.substr(0, at) + "(" + num + ")/(" + den + ")" + s.substr(pos);
    }
}

void rewrite_sqrt(std::string& s) {
    std::size_t pos = 0;
    while ((pos = s.find("\\sqrt", pos)) != std::string::npos) {
        const auto arg = pos + 5;
        if (arg < s.size() && s[arg] != '{') {
            s.insert(arg + 1, "}");
            s.insert(arg, "{");
        }
        pos = arg;
    }
}

struct Rational {
    __int128 num = 0;
    __int128 den = 1;
};

__int128 gcd128(__int128 a, __int128 b) {
    if (a < 0)
        a = -a;
    if (b < 0)
        b = -b;
    while (b != 0) {
        const __int128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

// True when the parenthesis opening at 0 closes at the last character.
bool wrapped(const std::string& s) {
    if (s.size() < 2 || s.front() != '(' || s.back() != ')')
        return false;
    int depth = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '(')
            ++depth;
        else if (s[i] == ')' && --depth == 0)
            return i + 1 == s.size();
    }
    return false;
}

std::string strip_parens(std::string s) {
    while (wrapped(s))
        s = s.substr(1, s.size() - 2);
    return s;
}

std::optional<Rational> parse_decimal(std::string s) {
    s = strip_parens(std::move(s));
    bool negative = false;
    if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
        negative = s[0] == '-';
        s.erase(0, 1);
    }
    static const std::regex number(R"(^(\d*)(?:\.(\d*))?$)");
    std::smatch m;
    if (!std::regex_match(s, m, number))
        return std::nullopt;
    const std::string whole = m[1].str();
    const std::string frac = m[2].matched ? m[2].str() : "";
    if (whole.empty() && frac.empty())
        return std::nullopt;
    if (whole.size() + frac.size() > 30)
        return std::nullopt;
    Rational r;
    for (char c : whole + frac)
        r.num = r.num * 10 + (c - '0');
    for (std::size_t i = 0; i < frac.size(); ++i)
        r.den *= 10;
    if (negative)
        r.num = -r.num;
    return r;
}

std::optional<Rational> parse_rational(const std::string& text) {
    std::string s = strip_parens(text);
    bool negative = false;
    if (!s.empty() && s[0] == '-' && s.find('/') != std::string::npos) {
        negative = true;
        s.erase(0, 1);
    }
    std::optional<Rational> r;
    // Split at a top-level slash.
    int depth = 0;
    std::size_t slash = std::string::npos;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '(')
            ++depth;
        else if (s[i] == ')')
            --depth;
        else if (s[i] == '/' && depth == 0) {
            if (slash != std::string::npos)
                return std::nullopt;
            slash = i;
        }
    }
    if (slash == std::string::npos) {
        r = parse_decimal(s);
    } else {
        auto n = parse_decimal(s.substr(0, slash));
        auto d = parse_decimal(s.substr(slash + 1));
        if (!n || !d || d->num == 0)
            return std::nullopt;
        r = Rational{n->num * d->den, n->den * d->num};
    }
    if (!r)
        return std::nullopt;
    if (negative)
        r->num = -r->num;
    if (r->den < 0) {
        r->den = -r->den;
        r->num = -r->num;
    }
    const __int128 g = gcd128(r->num, r->den);
    if (g > 1) {
        r->num /= g;
        r->den /= g;
    }
    return r;
}

} // namespace

std::string normalize_option(std::string_view text) {
    std::string s = trim(text);
    for (std::string_view prefix : {"the answer is", "answer:"}) {
        if (starts_with_ci(s, prefix)) {
            s = trim(std::string_view(s).substr(prefix.size()));
            break;
        }
    }
    std::string out;
    for (char c : s) {
        if (std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')')
            continue;
        out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    while (!out.empty() && out.back() == '.')
        out.pop_back();
    return out;
}

std::string normalize_math(std::string_view text) {
    std::string s = last_boxed(trim(text));
    for (std::string_view junk : {"\\left", "\\right", "\\!", "\\,", "\\;", "\\:", "\\$", "$", "^\\circ", "^{\\circ}",
                                  "\\%", "%", "\\displaystyle"})
        replace_all(s, junk, "");
    replace_all(s, "\\dfrac", "\\frac");
    replace_all(s, "\\tfrac", "\\frac");
    unwrap(s, "\\text");
    unwrap(s, "\\mbox");
    unwrap(s, "\\mathrm");
    s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }), s.end());
    while (!s.empty() && s.back() == '.')
        s.pop_back();
    static const std::regex assignment(R"(^[A-Za-z]=(.+)$)");
    std::smatch m;
    if (std::regex_match(s, m, assignment))
        s = m[1].str();
    static const std::regex thousands(R"(^-?\d{1,3}(,\d{3})+(\.\d+)?$)");
    if (std::regex_match(s, thousands))
        s.erase(std::remove(s.begin(), s.end(), ','), s.end());
    rewrite_fracs(s);
    rewrite_sqrt(s);
    return s;
}

std::optional<ApiCall> parse_api_call(std::string_view text) {
    std::string s = trim(text);
    if (!s.empty() && s.front() == '{') {
        try {
            const auto doc = nlohmann::json::parse(s);
            ApiCall call;
            call.name = lower(trim(doc.at("api_name").get<std::string>()));
            if (doc.contains("parameters"))
                for (const auto& [k, v] : doc.at("parameters").items())
                    call.arguments[lower(trim(k))] = lower(trim(v.is_string() ? v.get<std::string>() : v.dump()));
            return call;
        } catch (const nlohmann::json::exception&) {
            return std::nullopt;
        }
    }
    if (starts_with_ci(s, "api-request:"))
        s = trim(std::string_view(s).substr(12));
    if (s.size() >= 2 && s.front() == '[' && s.back() == ']')
        s = trim(std::string_view(s).substr(1, s.size() - 2));
    static const std::regex call_re(R"(^([A-Za-z_][A-Za-z0-9_.]*)\s*\(([\s\S]*)\)$)");
    std::smatch m;
    if (!std::regex_match(s, m, call_re))
        return std::nullopt;
    ApiCall call;
    call.name = lower(m[1].str());
    const std::string args = m[2].str();

    std::vector<std::string> parts;
    std::string cur;
    char quote = 0;
    for (char c : args) {
        if (quote) {
            if (c == quote)
                quote = 0;
            cur += c;
        } else if (c == '\'' || c == '"') {
            quote = c;
            cur += c;
        } else if (c == ',') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (quote)
        return std::nullopt;
    if (!trim(cur).empty() || !parts.empty())
        parts.push_back(cur);
    for (const auto& part : parts) {
        const std::string p = trim(part);
        if (p.empty())
            continue;
        auto eq = p.find('=');
        if (eq == std::string::npos)
            eq = p.find(':');
        if (eq == std::string::npos)
            return std::nullopt;
        std::string key = lower(trim(std::string_view(p).substr(0, eq)));
        std::string value = trim(std::string_view(p).substr(eq + 1));
        if (value.size() >= 2 && (value.front() == '\'' || value.front() == '"') && value.back() == value.front())
            value = value.substr(1, value.size() - 2);
        // collapse internal whitespace
        std::string norm;
        bool space = false;
        for (char c : trim(value)) {
            if (std::isspace(static_cast<unsigned char>(c))) {
                space = true;
                continue;
            }
            if (space && !norm.empty())
                norm += ' ';
            space = false;
            norm += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        }
        if (key.empty())
            return std::nullopt;
        call.arguments[key] = norm;
    }
    return call;
}

int evaluate(BenchmarkKind kind, std::string_view answer, std::string_view gold) {
    switch (kind) {
    case BenchmarkKind::Bbh: {
        const auto a = normalize_option(answer);
        return !a.empty() && a == normalize_option(gold) ? 1 : 0;
    }
    case BenchmarkKind::Math: {
        const auto a = normalize_math(answer);
        const auto g = normalize_math(gold);
        if (a.empty())
            return 0;
        const auto ra = parse_rational(a);
        const auto rg = parse_rational(g);
        if (ra && rg)
            return ra->num == rg->num && ra->den == rg->den ? 1 : 0;
        return a == g ? 1 : 0;
    }
    case BenchmarkKind::ApiBank: {
        const auto a = parse_api_call(answer);
        const auto g = parse_api_call(gold);
        return a && g && *a == *g ? 1 : 0;
    }
    }
    return 0;
}

int evaluate(std::string_view kind, std::string_view answer, std::string_view gold) {
    return evaluate(parse_benchmark_kind(kind), answer, gold);
}

} // namespace agentnet::bench
