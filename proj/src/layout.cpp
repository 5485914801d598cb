#include "qcae/layout.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <tuple>

#include <nlohmann/json.hpp>

namespace qcae
{

namespace
{

std::string format_double(double v)
{
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, end);
}

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
    {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

bool is_bit_string(std::string_view s)
{
    return std::all_of(s.begin(), s.end(), [](char c) { return c == '0' || c == '1'; });
}

std::vector<std::string> split(std::string_view s, char sep)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true)
    {
        const auto pos = s.find(sep, start);
        out.emplace_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos)
        {
            break;
        }
        start = pos + 1;
    }
    return out;
}

}  // namespace

LayoutError::LayoutError(const std::string& what, std::size_t line, std::size_t column) :
        std::runtime_error(line == 0 ? what :
                                       "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
                                           what),
        line_{line},
        column_{column}
{}

CellRole CellRole::fixed(double p)
{
    if (p != 1.0 && p != -1.0)
    {
        throw LayoutError("fixed polarization must be exactly -1 or +1");
    }
    return {Kind::Fixed, {}, p};
}

std::string CellRole::to_string() const
{
    switch (kind)
    {
        case Kind::Normal: return "normal";
        case Kind::Input: return "input:" + label;
        case Kind::Output: return "output:" + label;
        case Kind::Fixed: return polarization > 0 ? "fixed:+1" : "fixed:-1";
    }
    return "normal";
}

CellRole CellRole::parse(std::string_view token)
{
    if (token == "normal")
    {
        return normal();
    }
    if (token == "fixed:+1" || token == "fixed:1")
    {
        return fixed(1.0);
    }
    if (token == "fixed:-1")
    {
        return fixed(-1.0);
    }
    const auto colon = token.find(':');
    if (colon != std::string_view::npos && colon + 1 < token.size())
    {
        const auto kind = token.substr(0, colon);
        std::string label(token.substr(colon + 1));
        if (kind == "input")
        {
            return input(std::move(label));
        }
        if (kind == "output")
        {
            return output(std::move(label));
        }
    }
    throw LayoutError("unknown cell role '" + std::string(token) + "'");
}

std::optional<bool> TruthTable::expected(const std::map<std::string, bool>& bits, const std::string& output) const
{
    std::string key;
    for (const auto& in : inputs)
    {
        const auto it = bits.find(in);
        if (it == bits.end())
        {
            return std::nullopt;
        }
        key.push_back(it->second ? '1' : '0');
    }
    const auto row = rows.find(key);
    const auto col = std::find(outputs.begin(), outputs.end(), output);
    if (row == rows.end() || col == outputs.end())
    {
        return std::nullopt;
    }
    return row->second[static_cast<std::size_t>(col - outputs.begin())] == '1';
}

std::string TruthTable::to_string() const
{
    std::string s;
    for (std::size_t i = 0; i < inputs.size(); ++i)
    {
        s += (i ? "," : "") + inputs[i];
    }
    s += "/";
    for (std::size_t i = 0; i < outputs.size(); ++i)
    {
        s += (i ? "," : "") + outputs[i];
    }
    s += "/";
    bool first = true;
    for (const auto& [in, out] : rows)
    {
        s += (first ? "" : " ") + in + ":" + out;
        first = false;
    }
    return s;
}

TruthTable TruthTable::parse(std::string_view text)
{
    const auto parts = split(text, '/');
    if (parts.size() != 3)
    {
        throw LayoutError("truth table must have the form <inputs>/<outputs>/<rows>");
    }
    TruthTable table;
    table.inputs = split(parts[0], ',');
    table.outputs = split(parts[1], ',');
    for (const auto* labels : {&table.inputs, &table.outputs})
    {
        if (std::any_of(labels->begin(), labels->end(), [](const auto& l) { return l.empty(); }))
        {
            throw LayoutError("truth table has an empty label");
        }
    }
    std::istringstream rows{std::string(parts[2])};
    std::string row;
    while (rows >> row)
    {
        const auto colon = row.find(':');
        if (colon == std::string::npos)
        {
            throw LayoutError("truth table row '" + row + "' lacks ':'");
        }
        auto in = row.substr(0, colon);
        auto out = row.substr(colon + 1);
        if (in.size() != table.inputs.size() || out.size() != table.outputs.size() || !is_bit_string(in) ||
            !is_bit_string(out))
        {
            throw LayoutError("truth table row '" + row + "' does not match the declared labels");
        }
        if (!table.rows.emplace(std::move(in), std::move(out)).second)
        {
            throw LayoutError("truth table row '" + row + "' is listed twice");
        }
    }
    return table;
}

void TechnologyParams::validate() const
{
    const std::pair<const char*, double> positive[] = {
        {"qd_size", qd_size},         {"cell_width", cell_width},   {"cell_height", cell_height},
        {"cell_distance", cell_distance}, {"layer_distance", layer_distance}, {"tau", tau},
        {"gamma_high", gamma_high},   {"gamma_low", gamma_low},     {"epsilon_r", epsilon_r},
        {"temperature", temperature}, {"r_effect", r_effect}};
    for (const auto& [name, value] : positive)
    {
        if (!(value > 0.0))
        {
            throw std::invalid_argument(std::string("technology parameter ") + name + " must be positive");
        }
    }
    if (!(gamma_high > gamma_low))
    {
        throw std::invalid_argument("gamma_high must exceed gamma_low");
    }
    if (r_effect < cell_distance)
    {
        throw std::invalid_argument("r_effect must be at least the cell distance");
    }
    if (qd_size >= cell_width || qd_size >= cell_height)
    {
        throw std::invalid_argument("quantum dots do not fit inside the cell");
    }
}

void Layout::validate() const
{
    if (cells.empty())
    {
        throw LayoutError("layout has no cells");
    }
    std::set<std::tuple<double, double, int>> positions;
    std::set<int> ids;
    std::set<std::string> labels;
    for (const auto& c : cells)
    {
        if (c.clock_zone < 0 || c.clock_zone > 3)
        {
            throw LayoutError("cell " + std::to_string(c.id) + " has unknown clock zone " +
                              std::to_string(c.clock_zone));
        }
        if (c.layer < 0)
        {
            throw LayoutError("cell " + std::to_string(c.id) + " has a negative layer");
        }
        if (!positions.emplace(c.x, c.y, c.layer).second)
        {
            throw LayoutError("duplicate position (" + format_double(c.x) + ", " + format_double(c.y) + ", layer " +
                              std::to_string(c.layer) + ")");
        }
        if (!ids.insert(c.id).second)
        {
            throw LayoutError("duplicate cell id " + std::to_string(c.id));
        }
        if (c.role.is_fixed() && c.role.polarization != 1.0 && c.role.polarization != -1.0)
        {
            throw LayoutError("fixed polarization must be exactly -1 or +1");
        }
        if (c.role.is_input() || c.role.is_output())
        {
            if (c.role.label.empty())
            {
                throw LayoutError("input/output cell without a label");
            }
            if (!labels.insert(c.role.label).second)
            {
                throw LayoutError("label '" + c.role.label + "' is used twice");
            }
        }
    }
    if (expected_logic)
    {
        if (input_labels().empty())
        {
            throw LayoutError("expected logic given but the layout has no input cell");
        }
        for (const auto& l : expected_logic->inputs)
        {
            const auto* c = find_label(l);
            if (c == nullptr || !c->role.is_input())
            {
                throw LayoutError("expected logic references unknown input '" + l + "'");
            }
        }
        for (const auto& l : expected_logic->outputs)
        {
            const auto* c = find_label(l);
            if (c == nullptr || !c->role.is_output())
            {
                throw LayoutError("expected logic references unknown output '" + l + "'");
            }
        }
    }
}

std::vector<std::string> Layout::input_labels() const
{
    std::vector<std::string> out;
    for (const auto& c : cells)
    {
        if (c.role.is_input())
        {
            out.push_back(c.role.label);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::string> Layout::output_labels() const
{
    std::vector<std::string> out;
    for (const auto& c : cells)
    {
        if (c.role.is_output())
        {
            out.push_back(c.role.label);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

const Cell* Layout::find_label(std::string_view label) const
{
    for (const auto& c : cells)
    {
        if ((c.role.is_input() || c.role.is_output()) && c.role.label == label)
        {
            return &c;
        }
    }
    return nullptr;
}

// ---------------------------------------------------------------------------
// native text format

namespace
{

struct Token
{
    std::string_view text;
    std::size_t column;
};

std::vector<Token> tokenize(std::string_view line)
{
    std::vector<Token> tokens;
    std::size_t i = 0;
    while (i < line.size())
    {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r'))
        {
            ++i;
        }
        const auto start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r')
        {
            ++i;
        }
        if (i > start)
        {
            tokens.push_back({line.substr(start, i - start), start + 1});
        }
    }
    return tokens;
}

template <typename T>
T parse_number(const Token& tok, std::size_t line_no, const char* what)
{
    T value{};
    const auto* first = tok.text.data();
    const auto* last = first + tok.text.size();
    if (!tok.text.empty() && *first == '+')
    {
        ++first;
    }
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last)
    {
        throw LayoutError("expected " + std::string(what) + ", got '" + std::string(tok.text) + "'", line_no,
                          tok.column);
    }
    return value;
}

}  // namespace

Layout parse_layout(std::string_view text)
{
    Layout layout;
    std::optional<std::pair<std::string, std::size_t>> logic_text;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size())
    {
        const auto end = text.find('\n', start);
        auto line = text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
        start = end == std::string_view::npos ? text.size() + 1 : end + 1;
        ++line_no;

        if (const auto hash = line.find('#'); hash != std::string_view::npos)
        {
            line = line.substr(0, hash);
        }
        if (trim(line).empty())
        {
            continue;
        }
        const auto tokens = tokenize(line);
        if (tokens.front().text == "cell")
        {
            if (tokens.size() != 6)
            {
                throw LayoutError("cell record needs 5 fields: <x> <y> <layer> <zone> <role>", line_no,
                                  tokens.front().column);
            }
            Cell c;
            c.id = static_cast<int>(layout.cells.size());
            c.x = parse_number<double>(tokens[1], line_no, "x coordinate");
            c.y = parse_number<double>(tokens[2], line_no, "y coordinate");
            c.layer = parse_number<int>(tokens[3], line_no, "layer");
            c.clock_zone = parse_number<int>(tokens[4], line_no, "clock zone");
            if (c.clock_zone < 0 || c.clock_zone > 3)
            {
                throw LayoutError("unknown clock zone " + std::string(tokens[4].text), line_no, tokens[4].column);
            }
            try
            {
                c.role = CellRole::parse(tokens[5].text);
            }
            catch (const LayoutError& e)
            {
                throw LayoutError(e.what(), line_no, tokens[5].column);
            }
            layout.cells.push_back(std::move(c));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
        {
            throw LayoutError("expected 'key=value' or 'cell ...'", line_no, tokens.front().column);
        }
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        if (key == "name")
        {
            layout.name = std::string(value);
        }
        else if (key == "logic")
        {
            logic_text = std::make_pair(std::string(value), line_no);
        }
        else if (key == "reconstruction")
        {
            if (value != "0" && value != "1")
            {
                throw LayoutError("reconstruction must be 0 or 1", line_no, eq + 2);
            }
            layout.reconstruction = value == "1";
        }
        else
        {
            throw LayoutError("unknown header key '" + std::string(key) + "'", line_no, tokens.front().column);
        }
    }
    if (logic_text)
    {
        try
        {
            layout.expected_logic = TruthTable::parse(logic_text->first);
        }
        catch (const LayoutError& e)
        {
            throw LayoutError(e.what(), logic_text->second, 1);
        }
    }
    layout.validate();
    return layout;
}

std::string serialize_layout(const Layout& layout)
{
    std::string out = "name=" + layout.name + "\n";
    if (layout.reconstruction)
    {
        out += "reconstruction=1\n";
    }
    if (layout.expected_logic)
    {
        out += "logic=" + layout.expected_logic->to_string() + "\n";
    }
    for (const auto& c : layout.cells)
    {
        out += "cell " + format_double(c.x) + " " + format_double(c.y) + " " + std::to_string(c.layer) + " " +
               std::to_string(c.clock_zone) + " " + c.role.to_string() + "\n";
    }
    return out;
}

// ---------------------------------------------------------------------------
// JSON mirror

Layout parse_layout_json(std::string_view text)
{
    nlohmann::json doc;
    try
    {
        doc = nlohmann::json::parse(text);
    }
    catch (const nlohmann::json::parse_error& e)
    {
        throw LayoutError(std::string("invalid JSON: ") + e.what());
    }
    Layout layout;
    try
    {
        layout.name = doc.value("name", std::string{});
        layout.reconstruction = doc.value("reconstruction", false);
        if (doc.contains("logic"))
        {
            const auto& logic = doc.at("logic");
            TruthTable table;
            table.inputs = logic.at("inputs").get<std::vector<std::string>>();
            table.outputs = logic.at("outputs").get<std::vector<std::string>>();
            for (const auto& [in, out] : logic.at("rows").items())
            {
                const auto bits = out.get<std::string>();
                if (in.size() != table.inputs.size() || bits.size() != table.outputs.size() || !is_bit_string(in) ||
                    !is_bit_string(bits))
                {
                    throw LayoutError("truth table row '" + in + "' does not match the declared labels");
                }
                table.rows.emplace(in, bits);
            }
            layout.expected_logic = std::move(table);
        }
        for (const auto& jc : doc.at("cells"))
        {
            Cell c;
            c.id = static_cast<int>(layout.cells.size());
            c.x = jc.at("x").get<double>();
            c.y = jc.at("y").get<double>();
            c.layer = jc.value("layer", 0);
            c.clock_zone = jc.at("zone").get<int>();
            c.role = CellRole::parse(jc.value("role", std::string{"normal"}));
            layout.cells.push_back(std::move(c));
        }
    }
    catch (const nlohmann::json::exception& e)
    {
        throw LayoutError(std::string("malformed layout JSON: ") + e.what());
    }
    layout.validate();
    return layout;
}

std::string serialize_layout_json(const Layout& layout)
{
    nlohmann::ordered_json doc;
    doc["name"] = layout.name;
    doc["reconstruction"] = layout.reconstruction;
    if (layout.expected_logic)
    {
        nlohmann::ordered_json rows = nlohmann::ordered_json::object();
        for (const auto& [in, out] : layout.expected_logic->rows)
        {
            rows[in] = out;
        }
        doc["logic"] = {{"inputs", layout.expected_logic->inputs},
                        {"outputs", layout.expected_logic->outputs},
                        {"rows", rows}};
    }
    doc["cells"] = nlohmann::ordered_json::array();
    for (const auto& c : layout.cells)
    {
        doc["cells"].push_back(
            {{"x", c.x}, {"y", c.y}, {"layer", c.layer}, {"zone", c.clock_zone}, {"role", c.role.to_string()}});
    }
    return doc.dump(2) + "\n";
}

Layout load_layout_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
    {
        throw LayoutError("cannot open layout file '" + path + "'");
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    const auto text = buffer.str();
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{')
    {
        return parse_layout_json(text);
    }
    return parse_layout(text);
}

}  // namespace qcae
