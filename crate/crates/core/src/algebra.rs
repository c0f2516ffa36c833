//! Pairing groups, scalar field, hashing and canonical encodings.
//!
//! Everything curve-specific lives behind this module. The rest of the crate
//! works with [`Scalar`], [`G1`], [`G2`] and [`Gt`] in multiplicative
//! notation: `*` is the group operation, `/` multiplies by the inverse and
//! [`GroupElement::pow`] is exponentiation. The backend is BLS12-381, a
//! type-3 pairing at roughly 128-bit security.

#![allow(clippy::suspicious_arithmetic_impl)]

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use ark_bls12_381::{Bls12_381, Fr, G1Affine, G1Projective, G2Affine, G2Projective};
use ark_ec::pairing::{Pairing, PairingOutput};
use ark_ec::{CurveGroup, PrimeGroup};
use ark_ff::{BigInteger, Field, PrimeField, UniformRand, Zero};
use ark_serialize::{CanonicalDeserialize, CanonicalSerialize, Compress, Valid, Validate};
use rand::{CryptoRng, RngCore};
use sha2::{Digest, Sha512};
use thiserror::Error;

/// Name of the only supported curve profile.
pub const CURVE_PROFILE: &str = "bls12-381";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("malformed {0} encoding")]
    MalformedEncoding(ElementKind),
    #[error("{0} element is not in the prime-order subgroup")]
    NotInSubgroup(ElementKind),
    #[error("hash input has no parts")]
    EmptyHashInput,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ElementKind {
    Scalar,
    G1,
    G2,
    Gt,
}

impl ElementKind {
    pub const fn encoded_len(self) -> usize {
        match self {
            ElementKind::Scalar => Scalar::ENCODED_LEN,
            ElementKind::G1 => G1::ENCODED_LEN,
            ElementKind::G2 => G2::ENCODED_LEN,
            ElementKind::Gt => Gt::ENCODED_LEN,
        }
    }
}

impl fmt::Display for ElementKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ElementKind::Scalar => "scalar",
            ElementKind::G1 => "G1",
            ElementKind::G2 => "G2",
            ElementKind::Gt => "GT",
        })
    }
}

/// Encoding widths of the active curve profile, in bytes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CurveProfile {
    pub name: &'static str,
    pub scalar_len: usize,
    pub g1_len: usize,
    pub g2_len: usize,
    pub gt_len: usize,
}

impl CurveProfile {
    pub const fn active() -> Self {
        CurveProfile {
            name: CURVE_PROFILE,
            scalar_len: Scalar::ENCODED_LEN,
            g1_len: G1::ENCODED_LEN,
            g2_len: G2::ENCODED_LEN,
            gt_len: Gt::ENCODED_LEN,
        }
    }

    pub fn by_name(name: &str) -> Option<Self> {
        (name.eq_ignore_ascii_case(CURVE_PROFILE)).then(Self::active)
    }
}

/// An integer modulo the prime group order `r`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Scalar(Fr);

impl Scalar {
    /// Fixed big-endian width.
    pub const ENCODED_LEN: usize = 32;

    pub fn zero() -> Self {
        Scalar(Fr::zero())
    }

    pub fn one() -> Self {
        Scalar(Fr::from(1u64))
    }

    pub fn from_u64(v: u64) -> Self {
        Scalar(Fr::from(v))
    }

    pub fn random<R: RngCore + CryptoRng + ?Sized>(rng: &mut R) -> Self {
        Scalar(Fr::rand(rng))
    }

    /// Uniform in `[1, r-1]`.
    pub fn random_nonzero<R: RngCore + CryptoRng + ?Sized>(rng: &mut R) -> Self {
        loop {
            let s = Self::random(rng);
            if !s.is_zero() {
                return s;
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn inverse(&self) -> Option<Self> {
        self.0.inverse().map(Scalar)
    }

    /// Reduce a big-endian byte string of any length modulo `r`.
    pub fn from_be_bytes_mod_order(bytes: &[u8]) -> Self {
        Scalar(Fr::from_be_bytes_mod_order(bytes))
    }

    pub fn to_bytes(&self) -> [u8; Self::ENCODED_LEN] {
        let mut out = [0u8; Self::ENCODED_LEN];
        out.copy_from_slice(&self.0.into_bigint().to_bytes_be());
        out
    }

    /// Rejects wrong lengths and values `>= r`.
    pub fn from_bytes(bytes: &[u8]) -> Result<Self, AlgebraError> {
        let malformed = AlgebraError::MalformedEncoding(ElementKind::Scalar);
        if bytes.len() != Self::ENCODED_LEN {
            return Err(malformed);
        }
        let reduced = Scalar::from_be_bytes_mod_order(bytes);
        if reduced.to_bytes()[..] != *bytes {
            return Err(malformed);
        }
        Ok(reduced)
    }

    /// The group order `r`, big-endian.
    pub fn modulus_be() -> Vec<u8> {
        Fr::MODULUS.to_bytes_be()
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar(0x{})", hex(&self.to_bytes()))
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        Scalar(self.0 + rhs.0)
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        Scalar(self.0 - rhs.0)
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        Scalar(self.0 * rhs.0)
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar(-self.0)
    }
}

/// Operations shared by the three pairing groups.
pub trait GroupElement:
    Copy + Eq + fmt::Debug + Mul<Output = Self> + Div<Output = Self> + Sized
{
    const KIND: ElementKind;
    const ENCODED_LEN: usize;

    fn identity() -> Self;
    fn generator() -> Self;
    fn pow(&self, e: &Scalar) -> Self;
    fn inverse(&self) -> Self;
    fn is_identity(&self) -> bool;
    fn to_bytes(&self) -> Vec<u8>;
    /// Rejects wrong lengths, non-canonical encodings and off-subgroup points.
    fn from_bytes(bytes: &[u8]) -> Result<Self, AlgebraError>;

    fn random<R: RngCore + CryptoRng + ?Sized>(rng: &mut R) -> Self {
        Self::generator().pow(&Scalar::random(rng))
    }
}

fn encode_canonical<T: CanonicalSerialize>(value: &T) -> Vec<u8> {
    let mut out = Vec::with_capacity(value.compressed_size());
    value
        .serialize_compressed(&mut out)
        .expect("serializing into a Vec cannot fail");
    out
}

fn decode_canonical<T>(bytes: &[u8], kind: ElementKind) -> Result<T, AlgebraError>
where
    T: CanonicalSerialize + CanonicalDeserialize + Valid,
{
    let malformed = AlgebraError::MalformedEncoding(kind);
    if bytes.len() != kind.encoded_len() {
        return Err(malformed);
    }
    let value =
        T::deserialize_with_mode(bytes, Compress::Yes, Validate::No).map_err(|_| malformed)?;
    value
        .check()
        .map_err(|_| AlgebraError::NotInSubgroup(kind))?;
    if encode_canonical(&value) != bytes {
        return Err(malformed);
    }
    Ok(value)
}

macro_rules! curve_group {
    ($name:ident, $proj:ty, $affine:ty, $kind:expr, $len:expr) => {
        #[derive(Clone, Copy, PartialEq, Eq)]
        pub struct $name($proj);

        impl GroupElement for $name {
            const KIND: ElementKind = $kind;
            const ENCODED_LEN: usize = $len;

            fn identity() -> Self {
                $name(<$proj>::zero())
            }

            fn generator() -> Self {
                $name(<$proj>::generator())
            }

            fn pow(&self, e: &Scalar) -> Self {
                $name(self.0 * e.0)
            }

            fn inverse(&self) -> Self {
                $name(-self.0)
            }

            fn is_identity(&self) -> bool {
                self.0.is_zero()
            }

            fn to_bytes(&self) -> Vec<u8> {
                encode_canonical(&self.0.into_affine())
            }

            fn from_bytes(bytes: &[u8]) -> Result<Self, AlgebraError> {
                decode_canonical::<$affine>(bytes, $kind).map(|p| $name(p.into()))
            }
        }

        impl Mul for $name {
            type Output = $name;
            fn mul(self, rhs: $name) -> $name {
                $name(self.0 + rhs.0)
            }
        }

        impl Div for $name {
            type Output = $name;
            fn div(self, rhs: $name) -> $name {
                $name(self.0 - rhs.0)
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                let bytes = self.to_bytes();
                write!(f, "{}(0x{}..)", stringify!($name), hex(&bytes[..8]))
            }
        }
    };
}

curve_group!(G1, G1Projective, G1Affine, ElementKind::G1, 48);
curve_group!(G2, G2Projective, G2Affine, ElementKind::G2, 96);

/// Element of the pairing target group.
#[derive(Clone, Copy, PartialEq, Eq)]
pub struct Gt(PairingOutput<Bls12_381>);

impl GroupElement for Gt {
    const KIND: ElementKind = ElementKind::Gt;
    const ENCODED_LEN: usize = 576;

    fn identity() -> Self {
        Gt(PairingOutput::zero())
    }

    fn generator() -> Self {
        Gt(PairingOutput::generator())
    }

    fn pow(&self, e: &Scalar) -> Self {
        Gt(self.0 * e.0)
    }

    fn inverse(&self) -> Self {
        Gt(-self.0)
    }

    fn is_identity(&self) -> bool {
        self.0.is_zero()
    }

    fn to_bytes(&self) -> Vec<u8> {
        encode_canonical(&self.0)
    }

    fn from_bytes(bytes: &[u8]) -> Result<Self, AlgebraError> {
        decode_canonical::<PairingOutput<Bls12_381>>(bytes, ElementKind::Gt).map(Gt)
    }
}

impl Mul for Gt {
    type Output = Gt;
    fn mul(self, rhs: Gt) -> Gt {
        Gt(self.0 + rhs.0)
    }
}

impl Div for Gt {
    type Output = Gt;
    fn div(self, rhs: Gt) -> Gt {
        Gt(self.0 - rhs.0)
    }
}

impl fmt::Debug for Gt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gt(0x{}..)", hex(&self.to_bytes()[..8]))
    }
}

/// `e(p, q)`.
pub fn pair(p: &G1, q: &G2) -> Gt {
    Gt(Bls12_381::pairing(p.0.into_affine(), q.0.into_affine()))
}

/// `e(p_1, q_1) * ... * e(p_k, q_k)` with a single final exponentiation.
pub fn multi_pair(terms: &[(G1, G2)]) -> Gt {
    let ps: Vec<G1Affine> =
        G1Projective::normalize_batch(&terms.iter().map(|t| t.0 .0).collect::<Vec<_>>());
    let qs: Vec<G2Affine> =
        G2Projective::normalize_batch(&terms.iter().map(|t| t.1 .0).collect::<Vec<_>>());
    Gt(Bls12_381::multi_pairing(ps, qs))
}

/// Public generators of the pairing setting, with `gt = e(g1, g2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairingContext {
    pub g1: G1,
    pub g2: G2,
    pub gt: Gt,
}

impl PairingContext {
    pub fn standard() -> Self {
        let g1 = G1::generator();
        let g2 = G2::generator();
        PairingContext {
            g1,
            g2,
            gt: pair(&g1, &g2),
        }
    }
}

impl Default for PairingContext {
    fn default() -> Self {
        Self::standard()
    }
}

/// SHA-512 over a length-prefixed, domain-separated list of parts.
///
/// Layout: `len(tag) ‖ tag ‖ count ‖ (len(part) ‖ part)*`, every length a
/// big-endian u64.
pub fn wide_hash(domain_tag: &[u8], parts: &[&[u8]]) -> [u8; 64] {
    let mut hasher = Sha512::new();
    hasher.update((domain_tag.len() as u64).to_be_bytes());
    hasher.update(domain_tag);
    hasher.update((parts.len() as u64).to_be_bytes());
    for part in parts {
        hasher.update((part.len() as u64).to_be_bytes());
        hasher.update(part);
    }
    hasher.finalize().into()
}

/// Hash to a scalar by reducing 512 hash bits modulo `r` (bias below 2^-128).
pub fn hash_to_scalar(domain_tag: &[u8], parts: &[&[u8]]) -> Result<Scalar, AlgebraError> {
    if parts.is_empty() {
        return Err(AlgebraError::EmptyHashInput);
    }
    Ok(Scalar::from_be_bytes_mod_order(&wide_hash(
        domain_tag, parts,
    )))
}

/// A decoded value of a runtime-selected kind.
#[allow(clippy::large_enum_variant)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Element {
    Scalar(Scalar),
    G1(G1),
    G2(G2),
    Gt(Gt),
}

impl Element {
    pub fn kind(&self) -> ElementKind {
        match self {
            Element::Scalar(_) => ElementKind::Scalar,
            Element::G1(_) => ElementKind::G1,
            Element::G2(_) => ElementKind::G2,
            Element::Gt(_) => ElementKind::Gt,
        }
    }

    pub fn encode(&self) -> Vec<u8> {
        match self {
            Element::Scalar(s) => s.to_bytes().to_vec(),
            Element::G1(p) => p.to_bytes(),
            Element::G2(p) => p.to_bytes(),
            Element::Gt(p) => p.to_bytes(),
        }
    }
}

pub fn decode(bytes: &[u8], kind: ElementKind) -> Result<Element, AlgebraError> {
    Ok(match kind {
        ElementKind::Scalar => Element::Scalar(Scalar::from_bytes(bytes)?),
        ElementKind::G1 => Element::G1(G1::from_bytes(bytes)?),
        ElementKind::G2 => Element::G2(G2::from_bytes(bytes)?),
        ElementKind::Gt => Element::Gt(Gt::from_bytes(bytes)?),
    })
}

pub(crate) fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}
