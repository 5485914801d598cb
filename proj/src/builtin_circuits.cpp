#include "qcae/layout.hpp"

#include <functional>
#include <stdexcept>

namespace qcae
{

namespace
{

// Places cells on the 20 nm grid; coordinates are given in grid units.
class Builder
{
  public:
    explicit Builder(std::string name, bool reconstruction)
    {
        layout_.name = std::move(name);
        layout_.reconstruction = reconstruction;
    }

    Builder& cell(double gx, double gy, int zone, CellRole role = CellRole::normal(), int layer = 0)
    {
        const int id = static_cast<int>(layout_.cells.size());
        layout_.cells.push_back({id, gx * pitch, gy * pitch, layer, zone, std::move(role)});
        return *this;
    }

    /// Straight run of normal cells from (x0, y0) to (x1, y1) inclusive.
    Builder& line(int x0, int y0, int x1, int y1, int zone, int layer = 0)
    {
        const int sx = x1 > x0 ? 1 : (x1 < x0 ? -1 : 0);
        const int sy = y1 > y0 ? 1 : (y1 < y0 ? -1 : 0);
        for (int x = x0, y = y0;; x += sx, y += sy)
        {
            cell(x, y, zone, CellRole::normal(), layer);
            if (x == x1 && y == y1)
            {
                break;
            }
        }
        return *this;
    }

    Builder& logic(const std::string& spec)
    {
        layout_.expected_logic = TruthTable::parse(spec);
        return *this;
    }

    Layout build()
    {
        layout_.validate();
        return std::move(layout_);
    }

  private:
    static constexpr double pitch = 20.0;
    Layout layout_;
};

Layout wire8()
{
    Builder b("wire8", false);
    b.cell(0, 0, 0, CellRole::input("in"));
    const int zones[] = {0, 0, 1, 1, 2, 2, 3};
    for (int k = 0; k < 7; ++k)
    {
        b.cell(k + 1, 0, zones[k]);
    }
    b.cell(8, 0, 3, CellRole::output("out"));
    return b.logic("in/out/0:0 1:1").build();
}

Layout inverter()
{
    // input line forks; both branches couple diagonally onto the output line
    Builder b("inverter", false);
    b.cell(0, 0, 0, CellRole::input("a"));
    b.line(1, 0, 2, 0, 0);
    b.cell(2, -1, 0).cell(3, -1, 0);
    b.cell(2, 1, 0).cell(3, 1, 0);
    b.cell(4, 0, 1);
    b.cell(5, 0, 1, CellRole::output("f"));
    return b.logic("a/f/0:1 1:0").build();
}

// Three-input majority cross: inputs north, west, south; output east.
Builder majority_cross(const std::string& name, const CellRole& north, const CellRole& west, const CellRole& south)
{
    Builder b(name, true);
    b.cell(0, -1, 0, north);
    b.cell(-1, 0, 0, west);
    b.cell(0, 1, 0, south);
    b.cell(0, 0, 1);
    b.cell(1, 0, 2);
    b.cell(2, 0, 2, CellRole::output("f"));
    return b;
}

Layout maj_std()
{
    return majority_cross("maj_std", CellRole::input("a"), CellRole::input("b"), CellRole::input("c"))
        .logic("a,b,c/f/000:0 001:0 010:0 011:1 100:0 101:1 110:1 111:1")
        .build();
}

Layout or_std()
{
    return majority_cross("or_std", CellRole::fixed(1.0), CellRole::input("a"), CellRole::input("b"))
        .logic("a,b/f/00:0 01:1 10:1 11:1")
        .build();
}

Layout and_std()
{
    return majority_cross("and_std", CellRole::fixed(-1.0), CellRole::input("a"), CellRole::input("b"))
        .logic("a,b/f/00:0 01:0 10:0 11:1")
        .build();
}

// Reversible gates put the device cell at the centre of a diagonal cross. Inputs and the
// constant sit on three corners, the result leaves from the fourth, and every input line
// carries on past its corner into a copy (the demon) that holds while the device releases.
Builder diagonal_gate_inputs(const std::string& name)
{
    Builder b(name, true);
    b.cell(-3, -1, 0, CellRole::input("a")).line(-2, -1, -1, -1, 0);
    b.cell(-3, 1, 0, CellRole::input("b")).line(-2, 1, -1, 1, 0);
    b.cell(0, 0, 1);
    b.line(-1, -2, -1, -3, 1);
    b.line(-1, 2, -1, 3, 1).line(0, 3, 2, 3, 2).cell(3, 3, 2, CellRole::output("b_cp"));
    return b;
}

Layout gate_rev(const std::string& name, double constant, const std::string& logic)
{
    Builder b = diagonal_gate_inputs(name);
    b.cell(1, -1, 0, CellRole::fixed(constant));
    b.line(0, -3, 2, -3, 2).cell(3, -3, 2, CellRole::output("a_cp"));
    b.line(1, 1, 2, 1, 2).cell(3, 1, 2, CellRole::output("f"));
    return b.logic(logic).build();
}

Layout or_rev()
{
    return gate_rev("or_rev", 1.0, "a,b/f,a_cp,b_cp/00:000 01:101 10:110 11:111");
}

Layout and_rev()
{
    return gate_rev("and_rev", -1.0, "a,b/f,a_cp,b_cp/00:000 01:001 10:010 11:111");
}

Layout maj_rev()
{
    Builder b = diagonal_gate_inputs("maj_rev");
    b.cell(1, -4, 0, CellRole::input("c")).line(1, -3, 1, -1, 0);
    b.line(-1, -4, -1, -5, 2).cell(-1, -6, 2, CellRole::output("a_cp"));
    b.line(2, -1, 3, -1, 1).cell(4, -1, 2).cell(5, -1, 2, CellRole::output("c_cp"));
    b.line(1, 1, 3, 1, 2).cell(4, 1, 2, CellRole::output("f"));
    return b.logic("a,b,c/a_cp,b_cp,c_cp,f/000:0000 001:0010 010:0100 011:0111 100:1000 101:1011 "
                   "110:1101 111:1111")
        .build();
}

// Three diagonal gates: G1 = and(a, b), G2 = or(a, b), G3 = or(carry, nor) read out
// inverted, so sum = xor. a and b reach G2 over layer-2 bridges that cross the rest.
// Downstream of each device every zone boundary is a diagonal step, and the carry
// staircase winds through one quarter per cell until it meets the nor path at G3.
// Cells are listed by quarter of arrival q; zone = q mod 4.
Layout half_adder_rev()
{
    Builder b("half_adder_rev", true);
    const auto at = [&b](int x, int y, int q, CellRole role = CellRole::normal(), int layer = 0) -> Builder& {
        return b.cell(x, y, q % 4, std::move(role), layer);
    };
    for (const int s : {-1, 1})
    {
        const std::string label = s < 0 ? "a" : "b";
        at(-4, s, 0, CellRole::input(label));
        b.line(-3, s, -1, s, 0);
        b.line(-1, 2 * s, -1, 4 * s, 1);
        at(-1, 4 * s, 2, CellRole::normal(), 1);
        at(-1, 4 * s, 3, CellRole::normal(), 2);
        b.line(0, 4 * s, 6, 4 * s, 0, 2).line(7, 4 * s, 13, 4 * s, 1, 2).line(14, 4 * s, 19, 4 * s, 2, 2);
        at(19, 4 * s, 7, CellRole::normal(), 1);
        at(19, 4 * s, 8);
        b.line(19, 3 * s, 19, s, 1);
        b.line(20, s, 21, s, 2);
        at(22, s, 10, CellRole::output(label + "_cp"));
    }
    // G1
    at(1, -1, 0, CellRole::fixed(-1.0));
    at(0, 0, 1); at(1, 1, 1); at(2, 1, 1);
    at(3, 2, 2); at(4, 3, 3); at(4, 4, 3, CellRole::output("carry"));
    const int stair[][3] = {{3, 0, 2},   {4, -1, 3},  {5, -2, 4}, {6, -3, 5}, {7, -4, 6},
                            {8, -5, 7},  {9, -4, 8},  {10, -3, 9}, {9, -2, 10}, {8, -2, 10},
                            {7, -1, 11}, {7, 0, 11},  {8, 1, 12}};
    for (const auto& c : stair)
    {
        at(c[0], c[1], c[2]);
    }
    at(9, 2, 13); at(10, 2, 13); at(11, 2, 13);
    at(8, 3, 14); at(7, 4, 15); at(7, 5, 15, CellRole::output("g2"));
    // G2
    at(17, -1, 0, CellRole::fixed(1.0));
    at(18, 0, 10); at(17, 1, 10); at(17, 2, 10);
    at(16, 3, 11); at(16, 4, 11); at(15, 5, 12); at(14, 5, 12);
    at(13, 4, 13); at(13, 3, 13); at(13, 2, 13);
    at(12, 5, 14); at(11, 6, 15); at(11, 7, 15, CellRole::output("g1"));
    // G3
    at(13, 0, 0, CellRole::fixed(1.0));
    at(12, 1, 14); at(11, 0, 14); at(11, -1, 14);
    at(12, -2, 15); at(13, -3, 16); at(12, -4, 17); at(12, -5, 17, CellRole::output("sum"));
    return b.logic("a,b/a_cp,b_cp,carry,g1,g2,sum/00:000100 01:010001 10:100001 11:111010").build();
}

const std::vector<std::pair<std::string, std::function<Layout()>>>& registry()
{
    static const std::vector<std::pair<std::string, std::function<Layout()>>> r = {
        {"wire8", wire8},   {"inverter", inverter}, {"or_std", or_std},   {"and_std", and_std},
        {"maj_std", maj_std}, {"or_rev", or_rev},   {"and_rev", and_rev}, {"maj_rev", maj_rev},
        {"half_adder_rev", half_adder_rev}};
    return r;
}

}  // namespace

const std::vector<std::string>& builtin_circuit_names()
{
    static const std::vector<std::string> names = [] {
        std::vector<std::string> n;
        for (const auto& [name, make] : registry())
        {
            n.push_back(name);
        }
        return n;
    }();
    return names;
}

Layout builtin_circuit(std::string_view name)
{
    for (const auto& [n, make] : registry())
    {
        if (n == name)
        {
            return make();
        }
    }
    throw std::invalid_argument("unknown circuit '" + std::string(name) + "'");
}

}  // namespace qcae
