#include "cryolink/pattern.hpp"

#include <algorithm>
#include <limits>

#include "cryolink/errors.hpp"

namespace cryolink {

uint8_t gray_map(int b0, int b1) {
    if (b0 == 0) return b1 == 0 ? 0 : 1;
    return b1 == 0 ? 3 : 2;
}

void gray_unmap(uint8_t level, int& b0, int& b1) {
    switch (level & 3) {
        case 0: b0 = 0; b1 = 0; break;
        case 1: b0 = 0; b1 = 1; break;
        case 2: b0 = 1; b1 = 1; break;
        default: b0 = 1; b1 = 0; break;
    }
}

Lfsr7State::Lfsr7State(uint8_t reg) : reg_(static_cast<uint8_t>(reg & 0x7f)) {
    if (reg_ == 0) throw ConfigError("degenerate LFSR state: register must be nonzero");
}

int Lfsr7State::step() {
    const int bit = ((reg_ >> 6) ^ (reg_ >> 5)) & 1;
    reg_ = static_cast<uint8_t>(((reg_ << 1) | bit) & 0x7f);
    return bit;
}

std::vector<int> prbs7_generate(Lfsr7State seed, size_t n_bits) {
    std::vector<int> bits(n_bits);
    for (size_t i = 0; i < n_bits; ++i) bits[i] = seed.step();
    return bits;
}

SymbolStream prbs7q_generate(Lfsr7State seed, size_t n_symbols) {
    SymbolStream symbols(n_symbols);
    for (size_t i = 0; i < n_symbols; ++i) {
        const int b0 = seed.step();
        const int b1 = seed.step();
        symbols[i] = gray_map(b0, b1);
    }
    return symbols;
}

namespace {

uint64_t count_symbol_errors(const SymbolStream& reference, const SymbolStream& received, int offset) {
    const size_t n = received.size();
    const size_t ref_n = reference.size();
    uint64_t errors = 0;
    for (size_t k = 0; k < n; ++k) {
        if (received[k] != reference[(k + static_cast<size_t>(offset)) % ref_n]) ++errors;
    }
    return errors;
}

} // namespace

BerReport ber_check(const SymbolStream& reference, const SymbolStream& received, Alignment alignment) {
    if (received.empty()) throw ConfigError("ber_check: received stream is empty");
    if (reference.empty()) throw ConfigError("ber_check: reference stream is empty");

    int offset = alignment.offset;
    if (alignment.automatic) {
        if (received.size() < 2 * static_cast<size_t>(kPrbs7Period)) {
            throw StatsError("insufficient data for alignment: need at least 254 symbols");
        }
        uint64_t best = std::numeric_limits<uint64_t>::max();
        for (int cand = 0; cand < kPrbs7Period; ++cand) {
            const uint64_t errs = count_symbol_errors(reference, received, cand);
            if (errs < best) {
                best = errs;
                offset = cand;
            }
        }
    }

    BerReport report;
    report.alignment_offset = offset;
    report.symbols_compared = received.size();
    report.bits_compared = 2 * report.symbols_compared;
    const size_t ref_n = reference.size();
    for (size_t k = 0; k < received.size(); ++k) {
        const uint8_t want = reference[(k + static_cast<size_t>(offset)) % ref_n];
        const uint8_t got = received[k];
        if (want == got) continue;
        ++report.symbol_errors;
        int wb0, wb1, gb0, gb1;
        gray_unmap(want, wb0, wb1);
        gray_unmap(got, gb0, gb1);
        report.bit_errors += static_cast<uint64_t>(wb0 != gb0) + static_cast<uint64_t>(wb1 != gb1);
    }
    report.ber = report.bits_compared > 0
                     ? static_cast<double>(report.bit_errors) / static_cast<double>(report.bits_compared)
                     : 0.0;
    report.confidence_note = report.bit_errors == 0
                                 ? "no errors observed; BER upper bound ~" +
                                       std::to_string(1.0 / static_cast<double>(report.bits_compared))
                                 : "counted";
    return report;
}

} // namespace cryolink
