//! The GSFL message flow between admin, server and clients.
//!
//! 1. Each client sends `GsReq` to the admin and receives `GsRep` with its
//!    credential and the session material.
//! 2. Each client sends a signed, sealed training request to the server.
//!    The first one makes the server fetch the session's verification
//!    values from the admin (`LatestGsVerReq`/`LatestGsVerRep`); they are
//!    cached for the rest of the session.
//! 3. Per iteration the server privately notifies the selected clients,
//!    verifies their signed updates, aggregates and broadcasts the model.
//! 4. The final model is sent to every client.

pub mod messages;
pub mod roles;
pub mod simulation;
pub mod transcript;
pub mod wire;

pub use messages::{ClientHandle, Envelope, Event, GsRep, MessageKind, Party};
pub use roles::{
    select_subset, signed_message, AdminRole, ClientRole, ProtocolError, RejectReason,
    ServerMetrics, ServerRole, VerificationCache,
};
pub use simulation::{
    run_session, run_session_with, RoleTimings, SessionConfig, SessionOutcome, Simulation,
};
pub use transcript::{Transcript, TranscriptEntry};
pub use wire::{Clock, LogicalClock, SystemClock, WireError, WireMessage, DEFAULT_TTL};
