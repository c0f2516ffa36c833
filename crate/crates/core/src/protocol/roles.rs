//! Admin, server and client state machines.
//!
//! Each role consumes one [`Envelope`] at a time and returns the envelopes
//! it wants sent. The server is built only from public group parameters and
//! what arrives on the wire; it has no field able to hold a member
//! credential or session exponents.

use std::collections::{BTreeMap, HashSet};

use rand::seq::index;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::Serialize;
use thiserror::Error;

use super::messages::{ClientHandle, Envelope, Event, GsRep, MessageKind, Party};
use super::wire::{WireError, WireMessage, DEFAULT_TTL};
use crate::algebra::{GroupElement, Gt};
use crate::envelope::{self, EnvelopeError, ServerKeys};
use crate::fedlearn::{self, ClientUpdate, Dataset, FedError, ModelParams};
use crate::group_signature::{
    self as gs, AdminKeys, GroupParams, GroupSigError, MemberCredential, MemberId, MemberStatus,
    SessionDescriptor, SessionKeys, SessionPublic, Signature,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProtocolError {
    #[error("client has been revoked")]
    RevokedClient,
    #[error("client was not selected for this iteration")]
    NotSelected,
    #[error("client holds session {held} but session {current} is current")]
    StaleSession { held: u32, current: u32 },
    #[error("client has not joined the group")]
    NotJoined,
    #[error("need m >= n >= 1, got m={m}, n={n}")]
    InvalidCounts { m: usize, n: usize },
    #[error("iteration count must be at least 1")]
    InvalidIterations,
    #[error(transparent)]
    GroupSig(#[from] GroupSigError),
    #[error(transparent)]
    Envelope(#[from] EnvelopeError),
    #[error(transparent)]
    Fed(#[from] FedError),
    #[error(transparent)]
    Wire(#[from] WireError),
}

/// Why the server dropped an inbound message.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum RejectReason {
    StaleSession,
    Replay,
    AuthFailure,
    MalformedMessage,
    SignatureReject,
    WrongGroup,
    Unexpected,
    BadDescriptor,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ServerMetrics {
    pub accepted_requests: u64,
    pub accepted_updates: u64,
    pub admin_fetches: u64,
    pub rejected: BTreeMap<RejectReason, u64>,
}

impl ServerMetrics {
    pub fn rejected_total(&self) -> u64 {
        self.rejected.values().sum()
    }

    pub fn rejected(&self, reason: RejectReason) -> u64 {
        self.rejected.get(&reason).copied().unwrap_or(0)
    }
}

const UPDATE_TAG: &[u8] = b"GSFL/update/v1";
const TRAINING_REQUEST_TAG: &[u8] = b"GSFL/train-req/v1";

/// The byte string a client signs: a per-kind tag, every immutable header
/// field, the session id and the plaintext payload.
pub fn signed_message(
    kind: MessageKind,
    wire: &WireMessage,
    session_id: u32,
    plaintext: &[u8],
) -> Vec<u8> {
    let tag = match kind {
        MessageKind::TrainingRequest => TRAINING_REQUEST_TAG,
        _ => UPDATE_TAG,
    };
    let mut m = Vec::with_capacity(tag.len() + 28 + plaintext.len());
    m.extend_from_slice(tag);
    m.extend_from_slice(&wire.gid.to_be_bytes());
    m.extend_from_slice(&session_id.to_be_bytes());
    m.extend_from_slice(&wire.mid.to_be_bytes());
    m.extend_from_slice(&wire.rand.to_be_bytes());
    m.extend_from_slice(&wire.ts.to_be_bytes());
    m.extend_from_slice(plaintext);
    m
}

/// A uniformly random `n`-subset of `pool`, in ascending order.
pub fn select_subset<R: RngCore>(
    pool: &[ClientHandle],
    n: usize,
    rng: &mut R,
) -> Result<Vec<ClientHandle>, ProtocolError> {
    if n > pool.len() {
        return Err(ProtocolError::InvalidCounts { m: pool.len(), n });
    }
    let mut picked: Vec<ClientHandle> = index::sample(rng, pool.len(), n)
        .into_iter()
        .map(|i| pool[i])
        .collect();
    picked.sort();
    Ok(picked)
}

fn notice_plaintext(session_id: u32, iteration: u32) -> Vec<u8> {
    let mut p = session_id.to_be_bytes().to_vec();
    p.extend_from_slice(&iteration.to_be_bytes());
    p
}

fn parse_notice(bytes: &[u8]) -> Option<(u32, u32)> {
    let b: [u8; 8] = bytes.try_into().ok()?;
    Some((
        u32::from_be_bytes(b[..4].try_into().expect("4 bytes")),
        u32::from_be_bytes(b[4..].try_into().expect("4 bytes")),
    ))
}

pub struct AdminRole {
    keys: AdminKeys,
    params: GroupParams,
    session: SessionKeys,
    descriptor: SessionDescriptor,
    history: BTreeMap<u32, SessionKeys>,
    handles: BTreeMap<MemberId, ClientHandle>,
    rng: ChaCha20Rng,
}

impl AdminRole {
    pub fn new(seed: u64, group_id: u16) -> Result<Self, ProtocolError> {
        let (params, mut keys) = gs::setup(&seed.to_be_bytes(), group_id)?;
        let mut rng = ChaCha20Rng::seed_from_u64(seed ^ 0xad31);
        let session = gs::new_session(&mut keys, &params);
        let descriptor = gs::describe_session(&keys, &params, &session, &mut rng);
        let history = BTreeMap::from([(session.session_id, session.clone())]);
        Ok(AdminRole {
            keys,
            params,
            session,
            descriptor,
            history,
            handles: BTreeMap::new(),
            rng,
        })
    }

    pub fn params(&self) -> &GroupParams {
        &self.params
    }

    pub fn keys(&self) -> &AdminKeys {
        &self.keys
    }

    pub fn session_id(&self) -> u32 {
        self.session.session_id
    }

    pub fn session_public(&self) -> SessionPublic {
        self.session.public()
    }

    /// Tell the server which session is current.
    pub fn announce(&self) -> Envelope {
        Envelope::new(
            self.session_id(),
            Party::Admin,
            Party::Server,
            Event::AdminToServer {
                session_id: self.session_id(),
            },
        )
    }

    pub fn handle(&mut self, env: Envelope) -> Result<Vec<Envelope>, ProtocolError> {
        let sid = self.session_id();
        match env.event {
            Event::GsReq { member } => {
                if self.keys.status(member) == Some(MemberStatus::Revoked) {
                    return Err(ProtocolError::RevokedClient);
                }
                let cred = gs::issue(&mut self.keys, &self.params, member)?;
                if let Party::Client(h) = env.sender {
                    self.handles.insert(member, h);
                }
                Ok(vec![Envelope::new(
                    sid,
                    Party::Admin,
                    env.sender,
                    self.gs_rep(&cred),
                )])
            }
            Event::LatestGsVerReq { gid } if gid == self.params.group_id => {
                Ok(vec![Envelope::new(
                    sid,
                    Party::Admin,
                    Party::Server,
                    Event::LatestGsVerRep {
                        descriptor: self.descriptor,
                        c1: self.session.c1,
                        c2: self.session.c2,
                    },
                )])
            }
            _ => Ok(vec![]),
        }
    }

    fn gs_rep(&self, cred: &MemberCredential) -> Event {
        Event::GsRep(GsRep {
            member: cred.member_id,
            x: cred.x,
            a_i: cred.a,
            session: self.session.clone(),
        })
    }

    /// Revoke a member, rotate the session, notify the server and re-key
    /// every remaining active member.
    pub fn revoke(
        &mut self,
        member: MemberId,
        reason: &str,
    ) -> Result<Vec<Envelope>, ProtocolError> {
        self.session = gs::revoke(&mut self.keys, &self.params, member, reason)?;
        self.descriptor =
            gs::describe_session(&self.keys, &self.params, &self.session, &mut self.rng);
        self.history
            .insert(self.session.session_id, self.session.clone());
        let mut out = vec![self.announce()];
        let active: Vec<MemberId> = self.keys.active_members().collect();
        for id in active {
            let (Some(entry), Some(&h)) = (self.keys.entry(id), self.handles.get(&id)) else {
                continue;
            };
            let cred = MemberCredential::new(id, entry.x, entry.a);
            out.push(Envelope::new(
                self.session_id(),
                Party::Admin,
                Party::Client(h),
                self.gs_rep(&cred),
            ));
        }
        Ok(out)
    }

    /// Identify the signer of a signature made under `session_id`.
    pub fn trace(&self, session_id: u32, sig: &Signature) -> Result<MemberId, ProtocolError> {
        let sess = self
            .history
            .get(&session_id)
            .ok_or(ProtocolError::GroupSig(GroupSigError::InvalidSession))?;
        Ok(gs::open(&self.keys, sess, sig)?)
    }
}

/// What the server caches after one admin fetch per session.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerificationCache {
    pub descriptor: SessionDescriptor,
    pub session: SessionPublic,
}

pub struct ServerRole {
    keys: ServerKeys,
    params: GroupParams,
    session_id: u32,
    cache: Option<VerificationCache>,
    fetch_in_flight: bool,
    pending: Vec<Envelope>,
    seen_rands: HashSet<u128>,
    requesters: BTreeMap<ClientHandle, Gt>,
    iteration: u32,
    iteration_open: bool,
    expected_updates: usize,
    buffer: Vec<ClientUpdate>,
    model: ModelParams,
    metrics: ServerMetrics,
    received: Vec<Vec<u8>>,
    rng: ChaCha20Rng,
}

impl ServerRole {
    pub fn new(params: GroupParams, initial_model: ModelParams, seed: u64) -> Self {
        let mut rng = ChaCha20Rng::seed_from_u64(seed ^ 0x5e7e);
        ServerRole {
            keys: envelope::server_keygen(&mut rng),
            params,
            session_id: 0,
            cache: None,
            fetch_in_flight: false,
            pending: Vec::new(),
            seen_rands: HashSet::new(),
            requesters: BTreeMap::new(),
            iteration: 0,
            iteration_open: false,
            expected_updates: 0,
            buffer: Vec::new(),
            model: initial_model,
            metrics: ServerMetrics::default(),
            received: Vec::new(),
            rng,
        }
    }

    pub fn public_key(&self) -> Gt {
        self.keys.public
    }

    pub fn model(&self) -> &ModelParams {
        &self.model
    }

    pub fn metrics(&self) -> &ServerMetrics {
        &self.metrics
    }

    pub fn cache(&self) -> Option<&VerificationCache> {
        self.cache.as_ref()
    }

    pub fn session_id(&self) -> u32 {
        self.session_id
    }

    pub fn iteration(&self) -> u32 {
        self.iteration
    }

    pub fn requesters(&self) -> Vec<ClientHandle> {
        self.requesters.keys().copied().collect()
    }

    /// Every byte string the server has received.
    pub fn received(&self) -> &[Vec<u8>] {
        &self.received
    }

    /// Encodings of everything the server holds: keys, parameters, cache,
    /// buffered updates, the model, client notice keys and received bytes.
    pub fn state_bytes(&self) -> Vec<Vec<u8>> {
        let p = &self.params;
        let mut out = vec![
            self.keys.secret().to_bytes().to_vec(),
            self.keys.public.to_bytes(),
            p.u.to_bytes(),
            p.v.to_bytes(),
            p.h1.to_bytes(),
            p.w.to_bytes(),
            self.model.to_bytes(),
        ];
        if let Some(c) = &self.cache {
            out.push(c.descriptor.signature.to_bytes());
            out.push(c.session.c1.to_bytes());
            out.push(c.session.c2.to_bytes());
        }
        out.extend(self.requesters.values().map(|g| g.to_bytes()));
        out.extend(self.buffer.iter().map(ClientUpdate::to_bytes));
        out.extend(self.pending.iter().filter_map(|e| e.event.to_bytes().ok()));
        out.extend(self.received.iter().cloned());
        out
    }

    fn reject(&mut self, reason: RejectReason) -> Vec<Envelope> {
        *self.metrics.rejected.entry(reason).or_default() += 1;
        vec![]
    }

    pub fn handle(&mut self, env: Envelope) -> Vec<Envelope> {
        if let Ok(bytes) = env.event.to_bytes() {
            self.received.push(bytes);
        }
        match env.event {
            Event::AdminToServer { session_id } if env.sender == Party::Admin => {
                if session_id > self.session_id {
                    self.session_id = session_id;
                    self.cache = None;
                    self.fetch_in_flight = false;
                    self.seen_rands.clear();
                    self.requesters.clear();
                    self.pending.clear();
                }
                vec![]
            }
            Event::LatestGsVerRep { descriptor, c1, c2 } if env.sender == Party::Admin => {
                self.fetch_in_flight = false;
                let session = SessionPublic {
                    session_id: descriptor.session_id,
                    c1,
                    c2,
                };
                if descriptor.session_id != self.session_id
                    || !descriptor.verify(&self.params, &session).is_accept()
                {
                    return self.reject(RejectReason::BadDescriptor);
                }
                self.cache = Some(VerificationCache {
                    descriptor,
                    session,
                });
                let pending = std::mem::take(&mut self.pending);
                pending.into_iter().flat_map(|e| self.admit(e)).collect()
            }
            Event::TrainingRequest(_) | Event::UpdateMsg(_) => self.admit(env),
            _ => self.reject(RejectReason::Unexpected),
        }
    }

    fn admit(&mut self, env: Envelope) -> Vec<Envelope> {
        if env.session_id != self.session_id {
            return self.reject(RejectReason::StaleSession);
        }
        if self.cache.is_none() {
            self.pending.push(env);
            if self.fetch_in_flight {
                return vec![];
            }
            self.fetch_in_flight = true;
            self.metrics.admin_fetches += 1;
            return vec![Envelope::new(
                self.session_id,
                Party::Server,
                Party::Admin,
                Event::LatestGsVerReq {
                    gid: self.params.group_id,
                },
            )];
        }
        let kind = env.event.kind();
        let Some(wire) = env.event.wire() else {
            return self.reject(RejectReason::Unexpected);
        };
        let plaintext = match self.authenticate(kind, wire, env.session_id) {
            Ok(p) => p,
            Err(reason) => return self.reject(reason),
        };
        match (kind, env.sender) {
            // The requester's address is needed to send it a notice; an
            // update's sender is never looked at.
            (MessageKind::TrainingRequest, Party::Client(h)) => match Gt::from_bytes(&plaintext) {
                Ok(pk) => {
                    self.requesters.insert(h, pk);
                    self.metrics.accepted_requests += 1;
                    vec![]
                }
                Err(_) => self.reject(RejectReason::MalformedMessage),
            },
            (MessageKind::UpdateMsg, _) => {
                if !self.iteration_open || self.buffer.len() >= self.expected_updates {
                    return self.reject(RejectReason::Unexpected);
                }
                match ClientUpdate::from_bytes(&plaintext) {
                    Ok(u) if u.weights.len() == self.model.dim() => {
                        self.buffer.push(u);
                        self.metrics.accepted_updates += 1;
                        vec![]
                    }
                    _ => self.reject(RejectReason::MalformedMessage),
                }
            }
            _ => self.reject(RejectReason::Unexpected),
        }
    }

    /// Decrypt, then verify the group signature over the plaintext.
    fn authenticate(
        &mut self,
        kind: MessageKind,
        wire: &WireMessage,
        session_id: u32,
    ) -> Result<Vec<u8>, RejectReason> {
        let cache = self.cache.as_ref().expect("checked by caller");
        if wire.gid != self.params.group_id {
            return Err(RejectReason::WrongGroup);
        }
        if self.seen_rands.contains(&wire.rand) {
            return Err(RejectReason::Replay);
        }
        let plaintext = envelope::open_bytes(&self.keys, &wire.payload).map_err(|e| match e {
            EnvelopeError::AuthFailure => RejectReason::AuthFailure,
            _ => RejectReason::MalformedMessage,
        })?;
        let sig = Signature::from_bytes(&wire.gs).map_err(|_| RejectReason::MalformedMessage)?;
        let msg = signed_message(kind, wire, session_id, &plaintext);
        if !gs::verify(&self.params, &cache.session, &msg, &sig).is_accept() {
            return Err(RejectReason::SignatureReject);
        }
        self.seen_rands.insert(wire.rand);
        Ok(plaintext)
    }

    /// Pick `n` of the clients that asked to train and send each a sealed
    /// notice.
    pub fn begin_iteration(&mut self, n: usize) -> Result<Vec<Envelope>, ProtocolError> {
        let pool = self.requesters();
        let chosen = select_subset(&pool, n, &mut self.rng)?;
        self.iteration += 1;
        self.iteration_open = true;
        self.expected_updates = chosen.len();
        self.buffer.clear();
        let plain = notice_plaintext(self.session_id, self.iteration);
        let mut out = Vec::with_capacity(chosen.len());
        for h in chosen {
            let sealed = envelope::seal(&self.requesters[&h], &plain, &mut self.rng)?;
            out.push(Envelope::new(
                self.session_id,
                Party::Server,
                Party::Client(h),
                Event::SelectionNotice {
                    sealed: sealed.to_bytes(),
                },
            ));
        }
        Ok(out)
    }

    /// Aggregate the accepted updates (keeping the old model if there are
    /// none) and broadcast the result.
    pub fn finish_iteration(&mut self) -> Result<Envelope, ProtocolError> {
        if !self.buffer.is_empty() {
            self.model = fedlearn::aggregate(&self.buffer)?;
        }
        self.buffer.clear();
        self.iteration_open = false;
        Ok(Envelope::new(
            self.session_id,
            Party::Server,
            Party::AllClients,
            Event::GlobalModel {
                iteration: self.iteration,
                model: self.model.to_bytes(),
            },
        ))
    }

    /// The final model, sent individually to every requester.
    pub fn finish_session(&mut self) -> Vec<Envelope> {
        self.requesters()
            .into_iter()
            .map(|h| {
                Envelope::new(
                    self.session_id,
                    Party::Server,
                    Party::Client(h),
                    Event::GlobalModel {
                        iteration: self.iteration,
                        model: self.model.to_bytes(),
                    },
                )
            })
            .collect()
    }
}

pub struct ClientRole {
    handle: ClientHandle,
    member: MemberId,
    params: GroupParams,
    server_pk: Gt,
    notice_keys: ServerKeys,
    credential: Option<MemberCredential>,
    session: Option<SessionKeys>,
    newest_session_seen: u32,
    notice: Option<(u32, u32)>,
    model: ModelParams,
    data: Dataset,
    eta: f64,
    mid: u16,
    rng: ChaCha20Rng,
    errors: Vec<ProtocolError>,
    payload_override: Option<Vec<u8>>,
}

impl ClientRole {
    pub fn new(
        handle: ClientHandle,
        params: GroupParams,
        server_pk: Gt,
        data: Dataset,
        initial_model: ModelParams,
        eta: f64,
        seed: u64,
    ) -> Self {
        let mut rng = ChaCha20Rng::seed_from_u64(seed ^ (0xc1 << 32) ^ handle.0 as u64);
        ClientRole {
            handle,
            member: MemberId(handle.0 as u64),
            params,
            server_pk,
            notice_keys: envelope::server_keygen(&mut rng),
            credential: None,
            session: None,
            newest_session_seen: 0,
            notice: None,
            model: initial_model,
            data,
            eta,
            mid: 0,
            rng,
            errors: Vec::new(),
            payload_override: None,
        }
    }

    pub fn handle_id(&self) -> ClientHandle {
        self.handle
    }

    pub fn member_id(&self) -> MemberId {
        self.member
    }

    pub fn model(&self) -> &ModelParams {
        &self.model
    }

    pub fn errors(&self) -> &[ProtocolError] {
        &self.errors
    }

    pub fn session_id(&self) -> Option<u32> {
        self.session.as_ref().map(|s| s.session_id)
    }

    pub fn credential(&self) -> Option<&MemberCredential> {
        self.credential.as_ref()
    }

    pub fn session_keys(&self) -> Option<&SessionKeys> {
        self.session.as_ref()
    }

    pub fn notice_public(&self) -> Gt {
        self.notice_keys.public
    }

    pub fn join(&self) -> Envelope {
        Envelope::new(
            self.session_id().unwrap_or(0),
            Party::Client(self.handle),
            Party::Admin,
            Event::GsReq {
                member: self.member,
            },
        )
    }

    fn current_session(&self) -> Result<&SessionKeys, ProtocolError> {
        let sess = self.session.as_ref().ok_or(ProtocolError::NotJoined)?;
        if sess.session_id < self.newest_session_seen {
            return Err(ProtocolError::StaleSession {
                held: sess.session_id,
                current: self.newest_session_seen,
            });
        }
        Ok(sess)
    }

    /// A signed message sealed to the server.
    pub fn build_signed(
        &mut self,
        kind: MessageKind,
        plaintext: &[u8],
        now: u32,
    ) -> Result<Envelope, ProtocolError> {
        let sess = self.current_session()?.clone();
        let cred = self.credential.as_ref().ok_or(ProtocolError::NotJoined)?;
        let sealed = envelope::seal(&self.server_pk, plaintext, &mut self.rng)?;
        let mut wire = WireMessage {
            gid: self.params.group_id,
            mid: self.mid,
            rand: self.rng.gen(),
            payload: sealed.to_bytes(),
            gs: Vec::new(),
            ttl: DEFAULT_TTL,
            ts: now,
        };
        self.mid = self.mid.wrapping_add(1);
        let msg = signed_message(kind, &wire, sess.session_id, plaintext);
        wire.gs = gs::sign(cred, &sess, &self.params, &msg, &mut self.rng)?.to_bytes();
        let event = match kind {
            MessageKind::TrainingRequest => Event::TrainingRequest(wire),
            _ => Event::UpdateMsg(wire),
        };
        Ok(Envelope::new(
            sess.session_id,
            Party::Client(self.handle),
            Party::Server,
            event,
        ))
    }

    /// Ask to take part in training; carries the key for selection notices.
    pub fn training_request(&mut self, now: u32) -> Result<Envelope, ProtocolError> {
        let pk = self.notice_keys.public.to_bytes();
        self.build_signed(MessageKind::TrainingRequest, &pk, now)
    }

    /// Send `payload` as this iteration's update. Consumes the notice.
    pub fn submit(&mut self, payload: &[u8], now: u32) -> Result<Envelope, ProtocolError> {
        let (notice_session, _) = self.notice.ok_or(ProtocolError::NotSelected)?;
        let held = self.current_session()?.session_id;
        if notice_session != held {
            return Err(ProtocolError::StaleSession {
                held,
                current: notice_session,
            });
        }
        self.notice = None;
        self.build_signed(MessageKind::UpdateMsg, payload, now)
    }

    /// Submit these bytes instead of a trained update when selected.
    pub fn set_payload_override(&mut self, payload: Option<Vec<u8>>) {
        self.payload_override = payload;
    }

    /// Decrypt a selection notice to `(session_id, iteration)`.
    pub fn open_notice(&self, sealed: &[u8]) -> Result<(u32, u32), ProtocolError> {
        let plain = envelope::open_bytes(&self.notice_keys, sealed)?;
        Ok(parse_notice(&plain).ok_or(EnvelopeError::MalformedCiphertext)?)
    }

    /// One local step on the current global model.
    pub fn train(&self) -> Result<ClientUpdate, ProtocolError> {
        Ok(fedlearn::local_step(&self.model, &self.data, self.eta)?)
    }

    pub fn handle(&mut self, env: Envelope, now: u32) -> Vec<Envelope> {
        match self.step(env, now) {
            Ok(out) => out,
            Err(e) => {
                self.errors.push(e);
                vec![]
            }
        }
    }

    fn step(&mut self, env: Envelope, now: u32) -> Result<Vec<Envelope>, ProtocolError> {
        self.newest_session_seen = self.newest_session_seen.max(env.session_id);
        match env.event {
            Event::GsRep(rep) if rep.member == self.member => {
                let cred = MemberCredential::new(rep.member, rep.x, rep.a_i);
                if !cred.is_valid_for(&self.params) {
                    return Err(GroupSigError::UnknownMember.into());
                }
                self.credential = Some(cred);
                self.session = Some(rep.session);
                Ok(vec![])
            }
            Event::SelectionNotice { sealed } => {
                self.notice = Some(self.open_notice(&sealed)?);
                let payload = match &self.payload_override {
                    Some(p) => p.clone(),
                    None => self.train()?.to_bytes(),
                };
                Ok(vec![self.submit(&payload, now)?])
            }
            Event::GlobalModel { model, .. } => {
                self.model = ModelParams::from_bytes(&model)?;
                Ok(vec![])
            }
            _ => Ok(vec![]),
        }
    }
}
