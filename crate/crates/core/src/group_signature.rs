//! Session-based short group signature.
//!
//! The admin holds the issuing secret `gamma` and publishes `w = g2^gamma`.
//! A member credential is an SDH pair `(x, A)` with `A^(gamma + x) = g1`.
//! Per session the admin picks exponents `(a, b)` shared by all members and
//! publishes the tracing values `C1 = u^a`, `C2 = v^b`, so a signature only
//! carries `(C3, c, s1..s5)`:
//!
//! ```text
//! C3 = A * h1^(a+b)        delta1 = x*a        delta2 = x*b
//! B1 = u^da   B2 = v^db
//! B3 = e(C3,g2)^dx * e(h1,w)^(-da-db) * e(h1,g2)^(-dd1-dd2)
//! B4 = C1^dx * u^-dd1      B5 = C2^dx * v^-dd2
//! c  = H(M, C1, C2, C3, B1..B5)
//! s1 = da + c*a   s2 = db + c*b   s3 = dx + c*x   s4 = dd1 + c*delta1   s5 = dd2 + c*delta2
//! ```
//!
//! The verifier rebuilds `B1..B5` from the responses and accepts iff the
//! recomputed challenge equals `c`. It needs nothing but the public
//! parameters and `(C1, C2)`.
//!
//! Because `(a, b)` is shared for a whole session, `C3` is the same for every
//! signature a member produces within that session: signatures are
//! unlinkable across sessions but linkable within one. A fresh session
//! (see [`new_session`] and [`revoke`]) is the only re-randomization.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use rand::{CryptoRng, RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{
    hash_to_scalar, multi_pair, pair, wide_hash, AlgebraError, GroupElement, Gt, PairingContext,
    Scalar, G1, G2,
};

/// Fiat-Shamir domain tag.
pub const SIGNATURE_TAG: &[u8] = b"GSFL/sig/v1";
const SESSION_DESCRIPTOR_TAG: &[u8] = b"GSFL/session/v1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupSigError {
    #[error("setup seed must not be empty")]
    EmptySeed,
    #[error("member {0} is already registered")]
    DuplicateMember(MemberId),
    #[error("no registered member matches")]
    UnknownMember,
    #[error("member {0} is already revoked")]
    AlreadyRevoked(MemberId),
    #[error("credential has been revoked")]
    RevokedCredential,
    #[error("session keys are inconsistent with the group parameters")]
    InvalidSession,
    #[error("message must not be empty")]
    EmptyMessage,
    #[error("malformed signature: {0}")]
    MalformedSignature(AlgebraError),
}

/// Opaque member identifier assigned by the admin's registration process.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct MemberId(pub u64);

impl fmt::Display for MemberId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MemberStatus {
    Active,
    Revoked,
}

impl fmt::Display for MemberStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MemberStatus::Active => "active",
            MemberStatus::Revoked => "revoked",
        })
    }
}

/// Public parameters of one group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupParams {
    pub ctx: PairingContext,
    pub u: G1,
    pub v: G1,
    /// Blinding generator used in `C3 = A * h1^(a+b)`.
    pub h1: G1,
    /// Admin public key `g2^gamma`.
    pub w: G2,
    pub group_id: u16,
}

impl GroupParams {
    fn new(ctx: PairingContext, u: G1, v: G1, h1: G1, w: G2, group_id: u16) -> Self {
        GroupParams {
            ctx,
            u,
            v,
            h1,
            w,
            group_id,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RegistryEntry {
    pub x: Scalar,
    pub a: G1,
    pub status: MemberStatus,
    pub reason: Option<String>,
}

/// Admin secret state. Deliberately not serializable.
pub struct AdminKeys {
    gamma: Scalar,
    registry: BTreeMap<MemberId, RegistryEntry>,
    by_credential: HashMap<Vec<u8>, MemberId>,
    rng: ChaCha20Rng,
    next_session_id: u32,
    h1: G1,
    // Credential the admin uses for session descriptors; never in the registry.
    own: MemberCredential,
}

impl fmt::Debug for AdminKeys {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AdminKeys")
            .field("members", &self.registry.len())
            .field("next_session_id", &self.next_session_id)
            .finish_non_exhaustive()
    }
}

impl AdminKeys {
    pub fn entry(&self, id: MemberId) -> Option<&RegistryEntry> {
        self.registry.get(&id)
    }

    pub fn status(&self, id: MemberId) -> Option<MemberStatus> {
        self.registry.get(&id).map(|e| e.status)
    }

    pub fn members(&self) -> impl Iterator<Item = (MemberId, &RegistryEntry)> {
        self.registry.iter().map(|(id, e)| (*id, e))
    }

    pub fn active_members(&self) -> impl Iterator<Item = MemberId> + '_ {
        self.registry
            .iter()
            .filter(|(_, e)| e.status == MemberStatus::Active)
            .map(|(id, _)| *id)
    }

    /// `(member_id, reason)` for every revoked member.
    pub fn revocation_table(&self) -> Vec<(MemberId, String)> {
        self.registry
            .iter()
            .filter(|(_, e)| e.status == MemberStatus::Revoked)
            .map(|(id, e)| (*id, e.reason.clone().unwrap_or_default()))
            .collect()
    }

    /// One `member_id<TAB>status<TAB>reason` line per registered member.
    pub fn export_revocation_table(&self) -> String {
        let mut out = String::new();
        for (id, e) in &self.registry {
            let reason: String = e
                .reason
                .as_deref()
                .unwrap_or("")
                .chars()
                .map(|c| {
                    if c == '\t' || c == '\n' || c == '\r' {
                        ' '
                    } else {
                        c
                    }
                })
                .collect();
            out.push_str(&format!("{id}\t{}\t{reason}\n", e.status));
        }
        out
    }

    /// Does `A^(gamma + x) = g1` hold for this entry?
    pub fn check_entry(&self, params: &GroupParams, id: MemberId) -> bool {
        self.registry
            .get(&id)
            .map(|e| e.a.pow(&(self.gamma + e.x)) == params.ctx.g1)
            .unwrap_or(false)
    }
}

/// A member's secret SDH pair.
#[derive(Clone, PartialEq, Eq)]
pub struct MemberCredential {
    pub member_id: MemberId,
    pub x: Scalar,
    pub a: G1,
    revoked: bool,
}

impl fmt::Debug for MemberCredential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MemberCredential")
            .field("member_id", &self.member_id)
            .field("revoked", &self.revoked)
            .finish_non_exhaustive()
    }
}

impl MemberCredential {
    pub fn new(member_id: MemberId, x: Scalar, a: G1) -> Self {
        MemberCredential {
            member_id,
            x,
            a,
            revoked: false,
        }
    }

    /// `e(A, w * g2^x) == e(g1, g2)`; checkable without the issuing secret.
    pub fn is_valid_for(&self, params: &GroupParams) -> bool {
        pair(&self.a, &(params.w * params.ctx.g2.pow(&self.x))) == params.ctx.gt
    }

    /// Record that the holder learned of its own revocation.
    pub fn mark_revoked(&mut self) {
        self.revoked = true;
    }

    pub fn is_revoked(&self) -> bool {
        self.revoked
    }
}

/// Per-session secrets `(a, b)` together with their public images.
#[derive(Clone, PartialEq, Eq)]
pub struct SessionKeys {
    pub session_id: u32,
    pub a: Scalar,
    pub b: Scalar,
    pub c1: G1,
    pub c2: G1,
}

impl fmt::Debug for SessionKeys {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SessionKeys")
            .field("session_id", &self.session_id)
            .field("c1", &self.c1)
            .field("c2", &self.c2)
            .finish_non_exhaustive()
    }
}

impl SessionKeys {
    pub fn public(&self) -> SessionPublic {
        SessionPublic {
            session_id: self.session_id,
            c1: self.c1,
            c2: self.c2,
        }
    }
}

/// What a verifier knows about a session.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SessionPublic {
    pub session_id: u32,
    pub c1: G1,
    pub c2: G1,
}

/// The seven-component signature `(C3, c, s1, s2, s3, s4, s5)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Signature {
    pub c3: G1,
    pub c: Scalar,
    pub s: [Scalar; 5],
}

impl Signature {
    pub const COMPONENTS: usize = 7;
    pub const ENCODED_LEN: usize = G1::ENCODED_LEN + 6 * Scalar::ENCODED_LEN;

    /// `C3 ‖ c ‖ s1 ‖ … ‖ s5`.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(Self::ENCODED_LEN);
        out.extend_from_slice(&self.c3.to_bytes());
        out.extend_from_slice(&self.c.to_bytes());
        for s in &self.s {
            out.extend_from_slice(&s.to_bytes());
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, GroupSigError> {
        if bytes.len() != Self::ENCODED_LEN {
            return Err(GroupSigError::MalformedSignature(
                AlgebraError::MalformedEncoding(crate::algebra::ElementKind::G1),
            ));
        }
        let (c3_bytes, rest) = bytes.split_at(G1::ENCODED_LEN);
        let c3 = G1::from_bytes(c3_bytes).map_err(GroupSigError::MalformedSignature)?;
        let mut scalars = rest
            .chunks_exact(Scalar::ENCODED_LEN)
            .map(|chunk| Scalar::from_bytes(chunk).map_err(GroupSigError::MalformedSignature));
        let c = scalars.next().expect("length checked")?;
        let mut s = [Scalar::zero(); 5];
        for slot in s.iter_mut() {
            *slot = scalars.next().expect("length checked")?;
        }
        Ok(Signature { c3, c, s })
    }
}

/// The five first-move commitments `B1..B5`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Commitments {
    pub b1: G1,
    pub b2: G1,
    pub b3: Gt,
    pub b4: G1,
    pub b5: G1,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Accept,
    Reject,
}

impl Verdict {
    pub fn is_accept(self) -> bool {
        self == Verdict::Accept
    }
}

/// The admin's signature over `(group_id, session_id)`, made with the same
/// algorithm members use. Servers treat it as the session's version token.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SessionDescriptor {
    pub group_id: u16,
    pub session_id: u32,
    pub signature: Signature,
}

impl SessionDescriptor {
    pub fn message(group_id: u16, session_id: u32) -> Vec<u8> {
        let mut m = SESSION_DESCRIPTOR_TAG.to_vec();
        m.extend_from_slice(&group_id.to_be_bytes());
        m.extend_from_slice(&session_id.to_be_bytes());
        m
    }

    pub fn verify(&self, params: &GroupParams, sess: &SessionPublic) -> Verdict {
        if self.group_id != params.group_id || self.session_id != sess.session_id {
            return Verdict::Reject;
        }
        verify(
            params,
            sess,
            &Self::message(self.group_id, self.session_id),
            &self.signature,
        )
    }
}

fn derived_generator(g1: &G1, seed: &[u8], tag: &[u8]) -> G1 {
    let e = hash_to_scalar(tag, &[seed]).expect("one part");
    g1.pow(&e)
}

fn sample_credential<R: RngCore + CryptoRng>(
    gamma: &Scalar,
    g1: &G1,
    id: MemberId,
    rng: &mut R,
) -> MemberCredential {
    loop {
        let x = Scalar::random(rng);
        if let Some(inv) = (*gamma + x).inverse() {
            return MemberCredential::new(id, x, g1.pow(&inv));
        }
    }
}

/// Deterministic group setup from a seed.
pub fn setup(seed: &[u8], group_id: u16) -> Result<(GroupParams, AdminKeys), GroupSigError> {
    if seed.is_empty() {
        return Err(GroupSigError::EmptySeed);
    }
    let ctx = PairingContext::standard();
    let stream = wide_hash(b"GSFL/setup/rng", &[seed]);
    let mut rng_seed = [0u8; 32];
    rng_seed.copy_from_slice(&stream[..32]);
    let mut rng = ChaCha20Rng::from_seed(rng_seed);

    let gamma = Scalar::random_nonzero(&mut rng);
    let u = derived_generator(&ctx.g1, seed, b"GSFL/setup/u");
    let v = derived_generator(&ctx.g1, seed, b"GSFL/setup/v");
    let h1 = derived_generator(&ctx.g1, seed, b"GSFL/setup/h1");
    let w = ctx.g2.pow(&gamma);
    let params = GroupParams::new(ctx, u, v, h1, w, group_id);

    let own = sample_credential(&gamma, &ctx.g1, MemberId(u64::MAX), &mut rng);
    let admin = AdminKeys {
        gamma,
        registry: BTreeMap::new(),
        by_credential: HashMap::new(),
        rng,
        next_session_id: 1,
        h1,
        own,
    };
    Ok((params, admin))
}

/// Register a member and hand out its credential.
pub fn issue(
    admin: &mut AdminKeys,
    params: &GroupParams,
    member_id: MemberId,
) -> Result<MemberCredential, GroupSigError> {
    if admin.registry.contains_key(&member_id) {
        return Err(GroupSigError::DuplicateMember(member_id));
    }
    let cred = sample_credential(&admin.gamma, &params.ctx.g1, member_id, &mut admin.rng);
    admin.by_credential.insert(cred.a.to_bytes(), member_id);
    admin.registry.insert(
        member_id,
        RegistryEntry {
            x: cred.x,
            a: cred.a,
            status: MemberStatus::Active,
            reason: None,
        },
    );
    Ok(cred)
}

/// Fresh `(a, b)` with a strictly increasing session id.
pub fn new_session(admin: &mut AdminKeys, params: &GroupParams) -> SessionKeys {
    let a = Scalar::random_nonzero(&mut admin.rng);
    let b = Scalar::random_nonzero(&mut admin.rng);
    let session_id = admin.next_session_id;
    admin.next_session_id += 1;
    SessionKeys {
        session_id,
        a,
        b,
        c1: params.u.pow(&a),
        c2: params.v.pow(&b),
    }
}

/// The admin's own signature over the session, for distribution to servers.
pub fn describe_session(
    admin: &AdminKeys,
    params: &GroupParams,
    sess: &SessionKeys,
    rng: &mut (impl RngCore + CryptoRng),
) -> SessionDescriptor {
    let msg = SessionDescriptor::message(params.group_id, sess.session_id);
    let (signature, _) = prove(&admin.own, sess, params, &msg, rng);
    SessionDescriptor {
        group_id: params.group_id,
        session_id: sess.session_id,
        signature,
    }
}

fn challenge(message: &[u8], sess: &SessionPublic, c3: &G1, b: &Commitments) -> Scalar {
    let parts = [
        message.to_vec(),
        sess.c1.to_bytes(),
        sess.c2.to_bytes(),
        c3.to_bytes(),
        b.b1.to_bytes(),
        b.b2.to_bytes(),
        b.b3.to_bytes(),
        b.b4.to_bytes(),
        b.b5.to_bytes(),
    ];
    let refs: Vec<&[u8]> = parts.iter().map(Vec::as_slice).collect();
    hash_to_scalar(SIGNATURE_TAG, &refs).expect("nine parts")
}

fn prove(
    cred: &MemberCredential,
    sess: &SessionKeys,
    params: &GroupParams,
    message: &[u8],
    rng: &mut (impl RngCore + CryptoRng),
) -> (Signature, Commitments) {
    let (a, b, x) = (sess.a, sess.b, cred.x);
    let c3 = cred.a * params.h1.pow(&(a + b));
    let delta1 = x * a;
    let delta2 = x * b;

    let da = Scalar::random(rng);
    let db = Scalar::random(rng);
    let dx = Scalar::random(rng);
    let dd1 = Scalar::random(rng);
    let dd2 = Scalar::random(rng);

    let commitments = Commitments {
        b1: params.u.pow(&da),
        b2: params.v.pow(&db),
        b3: multi_pair(&[
            (c3.pow(&dx) * params.h1.pow(&(-dd1 - dd2)), params.ctx.g2),
            (params.h1.pow(&(-da - db)), params.w),
        ]),
        b4: sess.c1.pow(&dx) / params.u.pow(&dd1),
        b5: sess.c2.pow(&dx) / params.v.pow(&dd2),
    };
    let c = challenge(message, &sess.public(), &c3, &commitments);
    let s = [
        da + c * a,
        db + c * b,
        dx + c * x,
        dd1 + c * delta1,
        dd2 + c * delta2,
    ];
    (Signature { c3, c, s }, commitments)
}

/// Sign `message` as an anonymous member of the group.
pub fn sign(
    cred: &MemberCredential,
    sess: &SessionKeys,
    params: &GroupParams,
    message: &[u8],
    rng: &mut (impl RngCore + CryptoRng),
) -> Result<Signature, GroupSigError> {
    sign_with_commitments(cred, sess, params, message, rng).map(|(sig, _)| sig)
}

/// [`sign`], also returning the commitments `B1..B5` it hashed.
pub fn sign_with_commitments(
    cred: &MemberCredential,
    sess: &SessionKeys,
    params: &GroupParams,
    message: &[u8],
    rng: &mut (impl RngCore + CryptoRng),
) -> Result<(Signature, Commitments), GroupSigError> {
    if cred.revoked {
        return Err(GroupSigError::RevokedCredential);
    }
    if message.is_empty() {
        return Err(GroupSigError::EmptyMessage);
    }
    if params.u.pow(&sess.a) != sess.c1 || params.v.pow(&sess.b) != sess.c2 {
        return Err(GroupSigError::InvalidSession);
    }
    Ok(prove(cred, sess, params, message, rng))
}

/// Rebuild `B1..B5` from a signature's responses.
pub fn recompute_commitments(
    params: &GroupParams,
    sess: &SessionPublic,
    sig: &Signature,
) -> Commitments {
    let [s1, s2, s3, s4, s5] = sig.s;
    let c = sig.c;
    let c3 = sig.c3;
    let h1 = params.h1;
    // e(C3,g2)^s3 * e(h1,w)^(-s1-s2) * e(h1,g2)^(-s4-s5) * (e(C3,w)/gt)^c
    Commitments {
        b1: params.u.pow(&s1) / sess.c1.pow(&c),
        b2: params.v.pow(&s2) / sess.c2.pow(&c),
        b3: multi_pair(&[
            (
                c3.pow(&s3) * h1.pow(&(-s4 - s5)) * params.ctx.g1.pow(&-c),
                params.ctx.g2,
            ),
            (c3.pow(&c) * h1.pow(&(-s1 - s2)), params.w),
        ]),
        b4: sess.c1.pow(&s3) / params.u.pow(&s4),
        b5: sess.c2.pow(&s3) / params.v.pow(&s5),
    }
}

/// Check a signature against the session's public tracing values only.
pub fn verify(
    params: &GroupParams,
    sess: &SessionPublic,
    message: &[u8],
    sig: &Signature,
) -> Verdict {
    let recomputed = recompute_commitments(params, sess, sig);
    if challenge(message, sess, &sig.c3, &recomputed) == sig.c {
        Verdict::Accept
    } else {
        Verdict::Reject
    }
}

/// [`verify`] on an encoded signature; decode failures are reported apart
/// from equation failures.
pub fn verify_encoded(
    params: &GroupParams,
    sess: &SessionPublic,
    message: &[u8],
    sig_bytes: &[u8],
) -> Result<Verdict, GroupSigError> {
    let sig = Signature::from_bytes(sig_bytes)?;
    Ok(verify(params, sess, message, &sig))
}

/// Trace a signature to its signer: `A = C3 * h1^-(a+b)`, then registry lookup.
///
/// The caller is expected to have verified `sig` under `sess`. Revoked
/// members are still traced.
pub fn open(
    admin: &AdminKeys,
    sess: &SessionKeys,
    sig: &Signature,
) -> Result<MemberId, GroupSigError> {
    let a = sig.c3 / admin.h1.pow(&(sess.a + sess.b));
    admin
        .by_credential
        .get(&a.to_bytes())
        .copied()
        .ok_or(GroupSigError::UnknownMember)
}

/// Mark a member revoked and rotate to a fresh session.
pub fn revoke(
    admin: &mut AdminKeys,
    params: &GroupParams,
    member_id: MemberId,
    reason: &str,
) -> Result<SessionKeys, GroupSigError> {
    let entry = admin
        .registry
        .get_mut(&member_id)
        .ok_or(GroupSigError::UnknownMember)?;
    if entry.status == MemberStatus::Revoked {
        return Err(GroupSigError::AlreadyRevoked(member_id));
    }
    entry.status = MemberStatus::Revoked;
    entry.reason = Some(reason.to_owned());
    Ok(new_session(admin, params))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rng(seed: u64) -> ChaCha20Rng {
        ChaCha20Rng::seed_from_u64(seed)
    }

    fn group(members: u64) -> (GroupParams, AdminKeys, Vec<MemberCredential>, SessionKeys) {
        let (params, mut admin) = setup(b"unit-test group", 7).unwrap();
        let creds = (0..members)
            .map(|i| issue(&mut admin, &params, MemberId(i)).unwrap())
            .collect();
        let sess = new_session(&mut admin, &params);
        (params, admin, creds, sess)
    }

    #[test]
    fn setup_is_deterministic() {
        let (p1, a1) = setup(b"seed", 1).unwrap();
        let (p2, a2) = setup(b"seed", 1).unwrap();
        assert_eq!(p1, p2);
        assert_eq!(a1.gamma, a2.gamma);
        assert_eq!(setup(b"", 1).unwrap_err(), GroupSigError::EmptySeed);
    }

    #[test]
    fn distinct_seeds_give_distinct_gamma() {
        let gammas: Vec<Scalar> = (0..10u8)
            .map(|i| setup(&[b's', i], 1).unwrap().1.gamma)
            .collect();
        for i in 0..gammas.len() {
            for j in i + 1..gammas.len() {
                assert_ne!(gammas[i], gammas[j]);
            }
        }
    }

    #[test]
    fn admin_public_key_matches_gamma() {
        let (params, admin) = setup(b"w check", 1).unwrap();
        assert_eq!(
            pair(&params.ctx.g1, &params.w),
            params.ctx.gt.pow(&admin.gamma)
        );
        assert!(!params.w.is_identity());
        assert!(params.u != params.v && params.v != params.h1 && params.u != params.h1);
    }

    #[test]
    fn issue_produces_sdh_credentials() {
        let (params, mut admin) = setup(b"issue", 1).unwrap();
        let c0 = issue(&mut admin, &params, MemberId(0)).unwrap();
        let c1 = issue(&mut admin, &params, MemberId(1)).unwrap();
        assert!(c0.is_valid_for(&params));
        assert!(c1.is_valid_for(&params));
        assert!(admin.check_entry(&params, MemberId(0)));
        assert_ne!(c0.x, c1.x);
        assert_ne!(c0.a, c1.a);
        assert_eq!(
            issue(&mut admin, &params, MemberId(0)).unwrap_err(),
            GroupSigError::DuplicateMember(MemberId(0))
        );
    }

    #[test]
    fn sessions_are_fresh() {
        let (params, mut admin) = setup(b"sessions", 1).unwrap();
        let sessions: Vec<SessionKeys> =
            (0..10).map(|_| new_session(&mut admin, &params)).collect();
        for (i, s) in sessions.iter().enumerate() {
            assert_eq!(s.c1, params.u.pow(&s.a));
            assert_eq!(s.c2, params.v.pow(&s.b));
            for t in &sessions[i + 1..] {
                assert!(t.session_id > s.session_id);
                assert_ne!((s.a, s.b), (t.a, t.b));
            }
        }
    }

    #[test]
    fn sign_verify_round_trip() {
        let (params, _admin, creds, sess) = group(3);
        let mut r = rng(1);
        for (i, cred) in creds.iter().enumerate() {
            let msg = format!("gradient {i}");
            let sig = sign(cred, &sess, &params, msg.as_bytes(), &mut r).unwrap();
            assert_eq!(
                verify(&params, &sess.public(), msg.as_bytes(), &sig),
                Verdict::Accept
            );
            assert_eq!(
                verify_encoded(&params, &sess.public(), msg.as_bytes(), &sig.to_bytes()).unwrap(),
                Verdict::Accept
            );
            assert_eq!(Signature::from_bytes(&sig.to_bytes()).unwrap(), sig);
        }
    }

    #[test]
    fn signing_is_deterministic_under_fixed_rng() {
        let (params, _admin, creds, sess) = group(1);
        let a = sign(&creds[0], &sess, &params, b"m", &mut rng(9)).unwrap();
        let b = sign(&creds[0], &sess, &params, b"m", &mut rng(9)).unwrap();
        assert_eq!(a, b);
        assert_eq!(1 + 1 + a.s.len(), Signature::COMPONENTS);
        assert_eq!(a.to_bytes().len(), Signature::ENCODED_LEN);
    }

    #[test]
    fn recomputed_commitments_match() {
        let (params, _admin, creds, sess) = group(2);
        let mut r = rng(2);
        for cred in &creds {
            let (sig, b) = sign_with_commitments(cred, &sess, &params, b"payload", &mut r).unwrap();
            assert_eq!(recompute_commitments(&params, &sess.public(), &sig), b);
        }
    }

    #[test]
    fn rejects_wrong_message_and_session() {
        let (params, mut admin, creds, sess) = group(1);
        let sig = sign(&creds[0], &sess, &params, b"original", &mut rng(3)).unwrap();
        assert_eq!(
            verify(&params, &sess.public(), b"originaL", &sig),
            Verdict::Reject
        );
        let other = new_session(&mut admin, &params);
        assert_eq!(
            verify(&params, &other.public(), b"original", &sig),
            Verdict::Reject
        );
    }

    #[test]
    fn tampered_signature_bytes_are_rejected() {
        let (params, _admin, creds, sess) = group(1);
        let mut r = rng(4);
        let sig = sign(&creds[0], &sess, &params, b"m", &mut r)
            .unwrap()
            .to_bytes();
        for _ in 0..40 {
            let bit = (r.next_u32() as usize) % (sig.len() * 8);
            let mut bad = sig.clone();
            bad[bit / 8] ^= 1 << (bit % 8);
            match verify_encoded(&params, &sess.public(), b"m", &bad) {
                Ok(Verdict::Accept) => panic!("bit {bit} flip accepted"),
                Ok(Verdict::Reject) | Err(GroupSigError::MalformedSignature(_)) => {}
                Err(e) => panic!("unexpected error {e}"),
            }
        }
        assert!(matches!(
            verify_encoded(&params, &sess.public(), b"m", &sig[1..]),
            Err(GroupSigError::MalformedSignature(_))
        ));
    }

    #[test]
    fn sign_preconditions() {
        let (params, mut admin, creds, sess) = group(1);
        let mut r = rng(5);
        assert_eq!(
            sign(&creds[0], &sess, &params, b"", &mut r).unwrap_err(),
            GroupSigError::EmptyMessage
        );
        let mut broken = sess.clone();
        broken.a = broken.a + Scalar::one();
        assert_eq!(
            sign(&creds[0], &broken, &params, b"m", &mut r).unwrap_err(),
            GroupSigError::InvalidSession
        );
        let mut revoked = creds[0].clone();
        revoked.mark_revoked();
        assert_eq!(
            sign(&revoked, &sess, &params, b"m", &mut r).unwrap_err(),
            GroupSigError::RevokedCredential
        );
        let _ = new_session(&mut admin, &params);
    }

    #[test]
    fn open_traces_every_member() {
        let (params, mut admin, creds, _) = group(20);
        let mut r = rng(6);
        for _ in 0..2 {
            let sess = new_session(&mut admin, &params);
            for cred in &creds {
                let sig = sign(cred, &sess, &params, b"trace me", &mut r).unwrap();
                assert_eq!(open(&admin, &sess, &sig).unwrap(), cred.member_id);
            }
        }
    }

    #[test]
    fn open_foreign_signature_is_unknown() {
        let (params, admin, _, sess) = group(2);
        let (fparams, mut fadmin) = setup(b"foreign", 7).unwrap();
        let fcred = issue(&mut fadmin, &fparams, MemberId(0)).unwrap();
        let fsess = new_session(&mut fadmin, &fparams);
        let sig = sign(&fcred, &fsess, &fparams, b"m", &mut rng(7)).unwrap();
        assert_eq!(verify(&params, &sess.public(), b"m", &sig), Verdict::Reject);
        assert_eq!(
            open(&admin, &sess, &sig).unwrap_err(),
            GroupSigError::UnknownMember
        );
    }

    #[test]
    fn revocation_flow() {
        let (params, mut admin, creds, sess) = group(3);
        let old_sig = sign(&creds[1], &sess, &params, b"before", &mut rng(8)).unwrap();
        let next = revoke(&mut admin, &params, MemberId(1), "poisoned updates").unwrap();
        assert!(next.session_id > sess.session_id);
        assert_eq!(open(&admin, &sess, &old_sig).unwrap(), MemberId(1));
        assert_eq!(admin.status(MemberId(1)), Some(MemberStatus::Revoked));
        assert_eq!(
            admin.revocation_table(),
            vec![(MemberId(1), "poisoned updates".to_string())]
        );
        assert_eq!(
            revoke(&mut admin, &params, MemberId(1), "again").unwrap_err(),
            GroupSigError::AlreadyRevoked(MemberId(1))
        );
        assert_eq!(
            revoke(&mut admin, &params, MemberId(99), "x").unwrap_err(),
            GroupSigError::UnknownMember
        );
        assert_eq!(
            admin.active_members().collect::<Vec<_>>(),
            vec![MemberId(0), MemberId(2)]
        );
        let table = admin.export_revocation_table();
        assert_eq!(
            table,
            "0\tactive\t\n1\trevoked\tpoisoned updates\n2\tactive\t\n"
        );
    }

    #[test]
    fn c3_is_per_member_per_session() {
        let (params, mut admin, creds, sess) = group(2);
        let mut r = rng(10);
        let s1 = sign(&creds[0], &sess, &params, b"a", &mut r).unwrap();
        let s2 = sign(&creds[0], &sess, &params, b"b", &mut r).unwrap();
        let s3 = sign(&creds[1], &sess, &params, b"a", &mut r).unwrap();
        assert_eq!(s1.c3, s2.c3);
        assert_ne!(s1.c3, s3.c3);
        let next = new_session(&mut admin, &params);
        let s4 = sign(&creds[0], &next, &params, b"a", &mut r).unwrap();
        assert_ne!(s1.c3, s4.c3);
    }

    #[test]
    fn session_descriptor_verifies() {
        let (params, mut admin, _, sess) = group(0);
        let d = describe_session(&admin, &params, &sess, &mut rng(11));
        assert_eq!(d.verify(&params, &sess.public()), Verdict::Accept);
        let other = new_session(&mut admin, &params);
        assert_eq!(d.verify(&params, &other.public()), Verdict::Reject);
        assert_eq!(
            open(&admin, &sess, &d.signature).unwrap_err(),
            GroupSigError::UnknownMember
        );
    }

    #[test]
    fn verifier_path_has_no_member_input() {
        let src = include_str!("group_signature.rs");
        let start = src.find("pub fn recompute_commitments(").unwrap();
        let end = src.find("/// Trace a signature to its signer").unwrap();
        let verifier = &src[start..end];
        for forbidden in [
            "AdminKeys",
            "registry",
            "MemberCredential",
            "SessionKeys",
            "gamma",
        ] {
            assert!(
                !verifier.contains(forbidden),
                "verifier path mentions {forbidden}"
            );
        }
    }
}
