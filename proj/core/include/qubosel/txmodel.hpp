#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qubosel {

// Bitcoin amounts are held as integer satoshis (1 BTC = 1e8 satoshi) so that
// decimal inputs with up to 8 fractional digits round-trip exactly.
using Satoshi = std::int64_t;

inline constexpr Satoshi kSatoshiPerBtc = 100'000'000;

inline double to_btc(Satoshi v) { return static_cast<double>(v) / 1e8; }

struct TxEntry {
  std::string address;
  Satoshi value = 0;  // >= 0
};

struct TxRecord {
  std::string txid;
  std::int64_t block_height = 0;  // >= 0
  std::int64_t timestamp = 0;     // unix seconds
  bool is_coinbase = false;       // implies inputs.empty()
  std::vector<TxEntry> inputs;
  std::vector<TxEntry> outputs;

  bool mentions(std::string_view address) const;
  // Sum of this address's entries on each side; an address may appear in
  // several entries of the same side.
  Satoshi input_value(std::string_view address) const;
  Satoshi output_value(std::string_view address) const;
};

enum class AddressClass { Exchange, Faucet, Gambling, Market, Mixer, Pool };

inline constexpr int kAddressClassCount = 6;

// Lowercase canonical serialization ("exchange", ..., "pool").
std::string_view to_string(AddressClass c);
// Case-insensitive parse; throws UnknownLabelError.
AddressClass parse_address_class(std::string_view s);

// Role of a transaction relative to one address. Mutually exclusive; the
// classifier applies the precedence Coinbase > Payback > Spent > Received.
enum class TxRole { Coinbase, Spent, Received, Payback };

std::string_view to_string(TxRole r);

// Throws AddressNotInTxError when the address appears on neither side.
TxRole classify_role(const TxRecord& tx, std::string_view address);

struct AddressHistory {
  std::string address;
  std::optional<AddressClass> label;
  // Ascending by (timestamp, txid); every record mentions `address`;
  // size <= the history cap used at build time.
  std::vector<TxRecord> txs;
};

inline constexpr std::size_t kDefaultHistoryCap = 1000;

}  // namespace qubosel
