#include "qubosel/txmodel.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include "qubosel/errors.hpp"

namespace qubosel {

bool TxRecord::mentions(std::string_view address) const {
  auto match = [&](const TxEntry& e) { return e.address == address; };
  return std::any_of(inputs.begin(), inputs.end(), match) ||
         std::any_of(outputs.begin(), outputs.end(), match);
}

Satoshi TxRecord::input_value(std::string_view address) const {
  Satoshi total = 0;
  for (const TxEntry& e : inputs)
    if (e.address == address) total += e.value;
  return total;
}

Satoshi TxRecord::output_value(std::string_view address) const {
  Satoshi total = 0;
  for (const TxEntry& e : outputs)
    if (e.address == address) total += e.value;
  return total;
}

namespace {

constexpr std::array<std::string_view, kAddressClassCount> kClassNames = {
    "exchange", "faucet", "gambling", "market", "mixer", "pool"};

std::string lowered(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

std::string_view to_string(AddressClass c) {
  return kClassNames[static_cast<int>(c)];
}

AddressClass parse_address_class(std::string_view s) {
  const std::string low = lowered(s);
  for (int i = 0; i < kAddressClassCount; ++i)
    if (low == kClassNames[i]) return static_cast<AddressClass>(i);
  throw UnknownLabelError("unknown address class label: \"" + std::string(s) + "\"");
}

std::string_view to_string(TxRole r) {
  switch (r) {
    case TxRole::Coinbase: return "coinbase";
    case TxRole::Spent: return "spent";
    case TxRole::Received: return "received";
    case TxRole::Payback: return "payback";
  }
  return "";
}

TxRole classify_role(const TxRecord& tx, std::string_view address) {
  auto match = [&](const TxEntry& e) { return e.address == address; };
  const bool in_inputs = std::any_of(tx.inputs.begin(), tx.inputs.end(), match);
  const bool in_outputs = std::any_of(tx.outputs.begin(), tx.outputs.end(), match);
  if (!in_inputs && !in_outputs)
    throw AddressNotInTxError("address \"" + std::string(address) +
                              "\" does not appear in tx " + tx.txid);
  if (tx.is_coinbase && in_outputs) return TxRole::Coinbase;
  if (in_inputs && in_outputs) return TxRole::Payback;
  if (in_inputs) return TxRole::Spent;
  return TxRole::Received;
}

}  // namespace qubosel
