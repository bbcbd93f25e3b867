//! Chemical reading of vertex and edge labels.

use std::fmt;

const SYMBOLS: [&str; 118] = [
    "H", "He", "Li", "Be", "B", "C", "N", "O", "F", "Ne", "Na", "Mg", "Al", "Si", "P", "S", "Cl",
    "Ar", "K", "Ca", "Sc", "Ti", "V", "Cr", "Mn", "Fe", "Co", "Ni", "Cu", "Zn", "Ga", "Ge", "As",
    "Se", "Br", "Kr", "Rb", "Sr", "Y", "Zr", "Nb", "Mo", "Tc", "Ru", "Rh", "Pd", "Ag", "Cd", "In",
    "Sn", "Sb", "Te", "I", "Xe", "Cs", "Ba", "La", "Ce", "Pr", "Nd", "Pm", "Sm", "Eu", "Gd", "Tb",
    "Dy", "Ho", "Er", "Tm", "Yb", "Lu", "Hf", "Ta", "W", "Re", "Os", "Ir", "Pt", "Au", "Hg", "Tl",
    "Pb", "Bi", "Po", "At", "Rn", "Fr", "Ra", "Ac", "Th", "Pa", "U", "Np", "Pu", "Am", "Cm", "Bk",
    "Cf", "Es", "Fm", "Md", "No", "Lr", "Rf", "Db", "Sg", "Bh", "Hs", "Mt", "Ds", "Rg", "Cn", "Nh",
    "Fl", "Mc", "Lv", "Ts", "Og",
];

/// Atomic number, or `Invalid` for labels that are not element symbols.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AtomId {
    Element(u8),
    Invalid,
}

impl AtomId {
    pub const HYDROGEN: AtomId = AtomId::Element(1);
    pub const CARBON: AtomId = AtomId::Element(6);
    pub const NITROGEN: AtomId = AtomId::Element(7);
    pub const OXYGEN: AtomId = AtomId::Element(8);

    pub fn from_symbol(symbol: &str) -> AtomId {
        SYMBOLS
            .iter()
            .position(|s| *s == symbol)
            .map(|i| AtomId::Element(i as u8 + 1))
            .unwrap_or(AtomId::Invalid)
    }

    pub fn symbol(self) -> Option<&'static str> {
        match self {
            AtomId::Element(z) => SYMBOLS.get(z as usize - 1).copied(),
            AtomId::Invalid => None,
        }
    }
}

impl fmt::Display for AtomId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AtomId::Element(z) => write!(f, "{z}"),
            AtomId::Invalid => f.write_str("Invalid"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AtomData {
    pub atom_id: AtomId,
    pub charge: i8,
}

/// Parses a vertex label as `<element>[<digit>]<sign>`, e.g. `O-`, `H+`,
/// `Fe2+`. Anything else is `Invalid` with charge 0.
pub fn atom_data_of(label: &str) -> AtomData {
    const INVALID: AtomData = AtomData {
        atom_id: AtomId::Invalid,
        charge: 0,
    };
    let (body, charge) = match label.as_bytes().last() {
        Some(b'+') | Some(b'-') => {
            let sign: i8 = if label.ends_with('+') { 1 } else { -1 };
            let rest = &label[..label.len() - 1];
            match rest.as_bytes().last() {
                Some(d) if d.is_ascii_digit() => {
                    let mag = (d - b'0') as i8;
                    if mag == 0 {
                        return INVALID;
                    }
                    (&rest[..rest.len() - 1], sign * mag)
                }
                _ => (rest, sign),
            }
        }
        _ => (label, 0),
    };
    match AtomId::from_symbol(body) {
        AtomId::Invalid => INVALID,
        atom_id => AtomData { atom_id, charge },
    }
}

/// Label text for an element with a charge; the inverse of
/// [`atom_data_of`] for valid atoms.
pub fn atom_label(symbol: &str, charge: i8) -> String {
    match charge {
        0 => symbol.to_owned(),
        1 => format!("{symbol}+"),
        -1 => format!("{symbol}-"),
        c if c > 0 => format!("{symbol}{c}+"),
        c => format!("{symbol}{}-", -c),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BondType {
    Single,
    Double,
    Triple,
    Aromatic,
    Invalid,
}

impl BondType {
    /// Bond order in half-units (aromatic = 3, i.e. 1.5).
    pub fn half_order(self) -> Option<u32> {
        match self {
            BondType::Single => Some(2),
            BondType::Double => Some(4),
            BondType::Triple => Some(6),
            BondType::Aromatic => Some(3),
            BondType::Invalid => None,
        }
    }

    pub fn label(self) -> Option<&'static str> {
        match self {
            BondType::Single => Some("-"),
            BondType::Double => Some("="),
            BondType::Triple => Some("#"),
            BondType::Aromatic => Some(":"),
            BondType::Invalid => None,
        }
    }
}

impl fmt::Display for BondType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            BondType::Single => "Single",
            BondType::Double => "Double",
            BondType::Triple => "Triple",
            BondType::Aromatic => "Aromatic",
            BondType::Invalid => "Invalid",
        };
        f.write_str(s)
    }
}

pub fn bond_type_of(label: &str) -> BondType {
    match label {
        "-" => BondType::Single,
        "=" => BondType::Double,
        "#" => BondType::Triple,
        ":" => BondType::Aromatic,
        _ => BondType::Invalid,
    }
}

/// Default valences of the SMILES organic subset, lowest first.
pub fn default_valences(symbol: &str) -> Option<&'static [u32]> {
    Some(match symbol {
        "B" => &[3],
        "C" => &[4],
        "N" => &[3, 5],
        "O" => &[2],
        "P" => &[3, 5],
        "S" => &[2, 4, 6],
        "F" | "Cl" | "Br" | "I" => &[1],
        _ => return None,
    })
}

/// Implicit hydrogens for an organic-subset atom given the sum of its
/// bond orders in half-units (aromatic bonds contribute 3, i.e. 1.5).
///
/// The sum is floored to whole units. Non-aromatic atoms take the lowest
/// default valence not below the sum; aromatic atoms only consider the
/// lowest valence. Atoms outside the organic subset get none.
pub fn implicit_hydrogen_count(symbol: &str, half_order_sum: u32, aromatic: bool) -> u32 {
    let Some(valences) = default_valences(symbol) else {
        return 0;
    };
    let sum = half_order_sum / 2;
    let candidates = if aromatic { &valences[..1] } else { valences };
    candidates
        .iter()
        .find(|&&v| v >= sum)
        .map(|&v| v - sum)
        .unwrap_or(0)
}
