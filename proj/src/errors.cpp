#include "bvm/errors.hpp"

namespace bvm {

std::string_view error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ModelMismatch: return "ModelMismatch";
    case ErrorKind::InvalidVariableTable: return "InvalidVariableTable";
    case ErrorKind::OddVariablePresent: return "OddVariablePresent";
    case ErrorKind::NotZeroDimensional: return "NotZeroDimensional";
    case ErrorKind::NonHomogeneousIdeal: return "NonHomogeneousIdeal";
    case ErrorKind::DeltaSNonzero: return "DeltaSNonzero";
    case ErrorKind::MasterEquationFails: return "MasterEquationFails";
    case ErrorKind::NonIsolatedSingularity: return "NonIsolatedSingularity";
    case ErrorKind::UnitInIdeal: return "UnitInIdeal";
    case ErrorKind::InvalidModel: return "InvalidModel";
    case ErrorKind::NotClosed: return "NotClosed";
    case ErrorKind::UnboundedSlice: return "UnboundedSlice";
    case ErrorKind::QuantumExtensionFails: return "QuantumExtensionFails";
    case ErrorKind::OddCouplingUnsupported: return "OddCouplingUnsupported";
    case ErrorKind::InternalIdentityViolation: return "InternalIdentityViolation";
    case ErrorKind::HbarDivisionFails: return "HbarDivisionFails";
    case ErrorKind::OracleMismatch: return "OracleMismatch";
    case ErrorKind::NotNilpotent: return "NotNilpotent";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::Usage: return "Usage";
  }
  return "Unknown";
}

}  // namespace bvm
