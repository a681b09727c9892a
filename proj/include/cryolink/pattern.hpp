#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace cryolink {

// PAM-4 symbols, levels 0..3. Bit pairs are Gray-coded so adjacent levels
// differ in exactly one bit:
//   (0,0) -> 0, (0,1) -> 1, (1,1) -> 2, (1,0) -> 3
using SymbolStream = std::vector<uint8_t>;

constexpr int kPrbs7Period = 127;

uint8_t gray_map(int b0, int b1);
void gray_unmap(uint8_t level, int& b0, int& b1);

// 7-bit LFSR state, feedback polynomial x^7 + x^6 + 1 (maximal length,
// period 127). The all-zero state is degenerate and rejected.
class Lfsr7State {
public:
    explicit Lfsr7State(uint8_t reg = 0x7f);

    uint8_t reg() const { return reg_; }
    // Advances the register one step and returns the generated bit.
    int step();

private:
    uint8_t reg_;
};

std::vector<int> prbs7_generate(Lfsr7State seed, size_t n_bits);

// Consecutive non-overlapping bit pairs of one PRBS7 run, Gray-mapped.
// 127 is odd, so the pairing offset walks the period and the symbol
// sequence repeats after exactly 127 symbols.
SymbolStream prbs7q_generate(Lfsr7State seed, size_t n_symbols);

struct BerReport {
    uint64_t bits_compared = 0;
    uint64_t bit_errors = 0;
    double ber = 0.0;
    uint64_t symbol_errors = 0;
    uint64_t symbols_compared = 0;
    int alignment_offset = 0;
    std::string confidence_note;
};

struct Alignment {
    bool automatic = true;
    int offset = 0; // used when automatic == false

    static Alignment auto_search() { return {true, 0}; }
    static Alignment fixed(int offset) { return {false, offset}; }
};

// Compares `received` against the (period-127) `reference` pattern. With
// automatic alignment, cyclic offsets 0..126 are searched for the minimum
// symbol-error rate; received[k] is checked against
// reference[(k + offset) mod reference.size()]. Bit errors are counted on
// the Gray-decoded pairs.
BerReport ber_check(const SymbolStream& reference, const SymbolStream& received,
                    Alignment alignment = Alignment::auto_search());

} // namespace cryolink
