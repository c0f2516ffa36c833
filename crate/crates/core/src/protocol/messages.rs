//! Protocol events exchanged between the admin, the server and clients.

use std::fmt;

use serde::{Serialize, Serializer};

use super::wire::{WireError, WireMessage};
use crate::algebra::{GroupElement, Scalar, G1};
use crate::group_signature::{MemberId, SessionDescriptor, SessionKeys};

/// Network address of a client. Distinct from the member identity that
/// the admin keeps in its registry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClientHandle(pub u32);

impl fmt::Display for ClientHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "client:{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Party {
    Admin,
    Server,
    Client(ClientHandle),
    /// Broadcast to every client; one message on the medium.
    AllClients,
}

impl Party {
    pub fn is_client_side(self) -> bool {
        matches!(self, Party::Client(_) | Party::AllClients)
    }
}

impl fmt::Display for Party {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Party::Admin => f.write_str("admin"),
            Party::Server => f.write_str("server"),
            Party::Client(h) => h.fmt(f),
            Party::AllClients => f.write_str("all-clients"),
        }
    }
}

impl Serialize for Party {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum MessageKind {
    GsReq,
    GsRep,
    AdminToServer,
    LatestGsVerReq,
    LatestGsVerRep,
    TrainingRequest,
    SelectionNotice,
    UpdateMsg,
    GlobalModel,
}

/// Credential plus session material handed to a member on join or rotation.
#[derive(Clone, PartialEq, Eq)]
pub struct GsRep {
    pub member: MemberId,
    pub x: Scalar,
    pub a_i: G1,
    pub session: SessionKeys,
}

impl fmt::Debug for GsRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GsRep")
            .field("member", &self.member)
            .field("session", &self.session)
            .finish_non_exhaustive()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Event {
    GsReq {
        member: MemberId,
    },
    GsRep(GsRep),
    /// A new session has started; cached verification material is void.
    AdminToServer {
        session_id: u32,
    },
    LatestGsVerReq {
        gid: u16,
    },
    LatestGsVerRep {
        descriptor: SessionDescriptor,
        c1: G1,
        c2: G1,
    },
    TrainingRequest(WireMessage),
    /// Hybrid ciphertext readable only by the addressed client.
    SelectionNotice {
        sealed: Vec<u8>,
    },
    UpdateMsg(WireMessage),
    GlobalModel {
        iteration: u32,
        model: Vec<u8>,
    },
}

impl Event {
    pub fn kind(&self) -> MessageKind {
        match self {
            Event::GsReq { .. } => MessageKind::GsReq,
            Event::GsRep(_) => MessageKind::GsRep,
            Event::AdminToServer { .. } => MessageKind::AdminToServer,
            Event::LatestGsVerReq { .. } => MessageKind::LatestGsVerReq,
            Event::LatestGsVerRep { .. } => MessageKind::LatestGsVerRep,
            Event::TrainingRequest(_) => MessageKind::TrainingRequest,
            Event::SelectionNotice { .. } => MessageKind::SelectionNotice,
            Event::UpdateMsg(_) => MessageKind::UpdateMsg,
            Event::GlobalModel { .. } => MessageKind::GlobalModel,
        }
    }

    pub fn wire(&self) -> Option<&WireMessage> {
        match self {
            Event::TrainingRequest(w) | Event::UpdateMsg(w) => Some(w),
            _ => None,
        }
    }

    pub fn wire_mut(&mut self) -> Option<&mut WireMessage> {
        match self {
            Event::TrainingRequest(w) | Event::UpdateMsg(w) => Some(w),
            _ => None,
        }
    }

    /// The body as it travels: the wire encoding for client messages,
    /// concatenated field encodings otherwise.
    pub fn to_bytes(&self) -> Result<Vec<u8>, WireError> {
        let mut out = Vec::new();
        match self {
            Event::GsReq { member } => out.extend_from_slice(&member.0.to_be_bytes()),
            Event::GsRep(rep) => {
                out.extend_from_slice(&rep.member.0.to_be_bytes());
                out.extend_from_slice(&rep.session.session_id.to_be_bytes());
                for g in [rep.session.c1, rep.session.c2, rep.a_i] {
                    out.extend_from_slice(&g.to_bytes());
                }
                for s in [rep.session.a, rep.session.b, rep.x] {
                    out.extend_from_slice(&s.to_bytes());
                }
            }
            Event::AdminToServer { session_id } => out.extend_from_slice(&session_id.to_be_bytes()),
            Event::LatestGsVerReq { gid } => out.extend_from_slice(&gid.to_be_bytes()),
            Event::LatestGsVerRep { descriptor, c1, c2 } => {
                out.extend_from_slice(&descriptor.group_id.to_be_bytes());
                out.extend_from_slice(&descriptor.session_id.to_be_bytes());
                out.extend_from_slice(&descriptor.signature.to_bytes());
                out.extend_from_slice(&c1.to_bytes());
                out.extend_from_slice(&c2.to_bytes());
            }
            Event::TrainingRequest(w) | Event::UpdateMsg(w) => out = w.to_bytes()?,
            Event::SelectionNotice { sealed } => out.extend_from_slice(sealed),
            Event::GlobalModel { iteration, model } => {
                out.extend_from_slice(&iteration.to_be_bytes());
                out.extend_from_slice(model);
            }
        }
        Ok(out)
    }

    pub fn byte_size(&self) -> usize {
        match self {
            Event::TrainingRequest(w) | Event::UpdateMsg(w) => w.encoded_len(),
            _ => self.to_bytes().map(|b| b.len()).unwrap_or(0),
        }
    }
}

/// An event in flight, tagged with the session it belongs to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Envelope {
    pub session_id: u32,
    pub sender: Party,
    pub receiver: Party,
    pub event: Event,
}

impl Envelope {
    pub fn new(session_id: u32, sender: Party, receiver: Party, event: Event) -> Self {
        Envelope {
            session_id,
            sender,
            receiver,
            event,
        }
    }
}
