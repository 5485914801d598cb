#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qcae
{

/// Thrown for malformed layout documents and invariant violations. `line` and
/// `column` are 1-based; zero means "not tied to a source location".
class LayoutError : public std::runtime_error
{
  public:
    explicit LayoutError(const std::string& what, std::size_t line = 0, std::size_t column = 0);

    [[nodiscard]] std::size_t line() const noexcept { return line_; }
    [[nodiscard]] std::size_t column() const noexcept { return column_; }

  private:
    std::size_t line_;
    std::size_t column_;
};

struct CellRole
{
    enum class Kind : std::uint8_t
    {
        Normal,
        Input,
        Output,
        Fixed
    };

    Kind kind = Kind::Normal;
    std::string label;  // Input/Output only
    double polarization = 0.0;  // Fixed only, exactly -1 or +1

    static CellRole normal() { return {}; }
    static CellRole input(std::string label) { return {Kind::Input, std::move(label), 0.0}; }
    static CellRole output(std::string label) { return {Kind::Output, std::move(label), 0.0}; }
    static CellRole fixed(double p);

    [[nodiscard]] bool is_input() const noexcept { return kind == Kind::Input; }
    [[nodiscard]] bool is_output() const noexcept { return kind == Kind::Output; }
    [[nodiscard]] bool is_fixed() const noexcept { return kind == Kind::Fixed; }

    /// Native-format token: normal, input:<l>, output:<l>, fixed:+1, fixed:-1.
    [[nodiscard]] std::string to_string() const;
    static CellRole parse(std::string_view token);

    friend bool operator==(const CellRole&, const CellRole&) = default;
};

struct Cell
{
    int id = 0;
    double x = 0.0;  // nm, cell center
    double y = 0.0;  // nm
    int layer = 0;
    int clock_zone = 0;
    CellRole role;

    friend bool operator==(const Cell&, const Cell&) = default;
};

/// Expected input → output behaviour of a layout. Rows are keyed by the input
/// bits in `inputs` order; values are output bits in `outputs` order.
struct TruthTable
{
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;
    std::map<std::string, std::string> rows;

    [[nodiscard]] bool is_total() const noexcept { return rows.size() == (std::size_t{1} << inputs.size()); }

    /// Expected output bit for `output` under the input assignment `bits`
    /// (label → bit). Empty when the row is not listed.
    [[nodiscard]] std::optional<bool> expected(const std::map<std::string, bool>& bits,
                                               const std::string& output) const;

    /// `a,b/f,ao/00:00 01:10 ...`
    [[nodiscard]] std::string to_string() const;
    static TruthTable parse(std::string_view text);

    friend bool operator==(const TruthTable&, const TruthTable&) = default;
};

struct Layout
{
    std::string name;
    std::vector<Cell> cells;
    std::optional<TruthTable> expected_logic;
    /// Built-ins whose geometry was reconstructed from figures rather than
    /// published coordinates.
    bool reconstruction = false;

    /// Throws LayoutError on any invariant violation; reassigns nothing.
    void validate() const;

    [[nodiscard]] std::vector<std::string> input_labels() const;  // sorted
    [[nodiscard]] std::vector<std::string> output_labels() const;  // sorted
    [[nodiscard]] const Cell* find_label(std::string_view label) const;

    friend bool operator==(const Layout&, const Layout&) = default;
};

/// Technology parameters; lengths in nm, energies in J, times in s.
struct TechnologyParams
{
    double qd_size = 5.0;
    double cell_width = 18.0;
    double cell_height = 18.0;
    double cell_distance = 20.0;
    double layer_distance = 11.5;
    double tau = 1e-15;
    double gamma_high = 9.8e-22;
    double gamma_low = 3.8e-23;
    double epsilon_r = 12.9;
    double temperature = 1.0;
    double r_effect = 80.0;

    void validate() const;

    friend bool operator==(const TechnologyParams&, const TechnologyParams&) = default;
};

Layout parse_layout(std::string_view text);
std::string serialize_layout(const Layout& layout);

/// JSON mirror of the native format.
Layout parse_layout_json(std::string_view text);
std::string serialize_layout_json(const Layout& layout);

/// Reads either format, picking JSON when the first non-blank character is `{`.
Layout load_layout_file(const std::string& path);

const std::vector<std::string>& builtin_circuit_names();
Layout builtin_circuit(std::string_view name);

}  // namespace qcae
