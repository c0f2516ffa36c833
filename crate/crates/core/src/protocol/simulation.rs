//! In-process network and the end-to-end session driver.
//!
//! Delivery is a single FIFO queue: lossless and ordered per link. Every
//! hop decrements a client message's TTL and a message that arrives with
//! TTL zero is dropped.

use std::collections::VecDeque;
use std::time::{Duration, Instant};

use serde::Serialize;

use super::messages::{ClientHandle, Envelope, Party};
use super::roles::{AdminRole, ClientRole, ProtocolError, ServerMetrics, ServerRole};
use super::transcript::Transcript;
use super::wire::{Clock, LogicalClock};
use crate::fedlearn::{self, ModelParams, SyntheticTask};
use crate::group_signature::MemberId;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SessionConfig {
    /// Clients in the network.
    pub m: usize,
    /// Clients selected per iteration.
    pub n: usize,
    /// Iterations.
    pub t: u32,
    pub seed: u64,
    /// Model dimension.
    pub d: usize,
    pub samples_per_client: usize,
    pub eta: f64,
    pub group_id: u16,
}

impl SessionConfig {
    pub fn new(m: usize, n: usize, t: u32, seed: u64) -> Self {
        SessionConfig {
            m,
            n,
            t,
            seed,
            d: 5,
            samples_per_client: 20,
            eta: fedlearn::DEFAULT_ETA,
            group_id: 1,
        }
    }

    pub fn validate(&self) -> Result<(), ProtocolError> {
        if self.n == 0 || self.m < self.n {
            return Err(ProtocolError::InvalidCounts {
                m: self.m,
                n: self.n,
            });
        }
        if self.t == 0 {
            return Err(ProtocolError::InvalidIterations);
        }
        Ok(())
    }
}

/// Wall-clock time spent inside each role's handlers.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct RoleTimings {
    pub admin: Duration,
    pub server: Duration,
    pub clients: Duration,
}

pub struct Simulation {
    config: SessionConfig,
    admin: AdminRole,
    server: ServerRole,
    clients: Vec<ClientRole>,
    task: SyntheticTask,
    queue: VecDeque<Envelope>,
    transcript: Transcript,
    clock: LogicalClock,
    expired: u64,
    admin_errors: Vec<ProtocolError>,
    timings: RoleTimings,
    models: Vec<ModelParams>,
    losses: Vec<(u32, f64)>,
    capture: Option<Vec<Envelope>>,
}

impl Simulation {
    pub fn new(config: SessionConfig) -> Result<Self, ProtocolError> {
        config.validate()?;
        let task =
            fedlearn::make_synthetic(config.seed, config.m, config.d, config.samples_per_client)?;
        let admin = AdminRole::new(config.seed, config.group_id)?;
        let initial = ModelParams::zeros(config.d);
        let server = ServerRole::new(admin.params().clone(), initial.clone(), config.seed);
        let clients = task
            .datasets
            .iter()
            .enumerate()
            .map(|(i, data)| {
                ClientRole::new(
                    ClientHandle(i as u32),
                    admin.params().clone(),
                    server.public_key(),
                    data.clone(),
                    initial.clone(),
                    config.eta,
                    config.seed,
                )
            })
            .collect();
        let initial_loss = fedlearn::pooled_loss(&initial, &task.datasets)?;
        let mut sim = Simulation {
            config,
            admin,
            server,
            clients,
            task,
            queue: VecDeque::new(),
            transcript: Transcript::default(),
            clock: LogicalClock::default(),
            expired: 0,
            admin_errors: Vec::new(),
            timings: RoleTimings::default(),
            models: Vec::new(),
            losses: vec![(0, initial_loss)],
            capture: None,
        };
        let hello = sim.admin.announce();
        sim.send(hello);
        sim.run();
        Ok(sim)
    }

    pub fn config(&self) -> &SessionConfig {
        &self.config
    }

    pub fn admin(&self) -> &AdminRole {
        &self.admin
    }

    pub fn server(&self) -> &ServerRole {
        &self.server
    }

    pub fn client(&self, h: ClientHandle) -> &ClientRole {
        &self.clients[h.0 as usize]
    }

    pub fn client_mut(&mut self, h: ClientHandle) -> &mut ClientRole {
        &mut self.clients[h.0 as usize]
    }

    pub fn clients(&self) -> &[ClientRole] {
        &self.clients
    }

    pub fn task(&self) -> &SyntheticTask {
        &self.task
    }

    pub fn transcript(&self) -> &Transcript {
        &self.transcript
    }

    /// Client messages dropped because their TTL ran out.
    pub fn expired(&self) -> u64 {
        self.expired
    }

    pub fn admin_errors(&self) -> &[ProtocolError] {
        &self.admin_errors
    }

    pub fn now(&mut self) -> u32 {
        self.clock.now()
    }

    /// Start keeping a copy of every envelope sent from now on, as a
    /// passive eavesdropper on the medium would see it.
    pub fn start_capture(&mut self) {
        self.capture.get_or_insert_with(Vec::new);
    }

    pub fn captured(&self) -> &[Envelope] {
        self.capture.as_deref().unwrap_or(&[])
    }

    /// Put an envelope on the network. Also the entry point for injected
    /// adversarial traffic.
    pub fn send(&mut self, env: Envelope) {
        self.transcript.record(&env);
        if let Some(log) = &mut self.capture {
            log.push(env.clone());
        }
        self.queue.push_back(env);
    }

    fn send_all(&mut self, envs: Vec<Envelope>) {
        envs.into_iter().for_each(|e| self.send(e));
    }

    /// Deliver until the network is quiet.
    pub fn run(&mut self) {
        while let Some(mut env) = self.queue.pop_front() {
            if let Some(wire) = env.event.wire_mut() {
                if wire.ttl == 0 {
                    self.expired += 1;
                    continue;
                }
                wire.ttl -= 1;
            }
            let now = self.clock.now();
            let started = Instant::now();
            let out = match env.receiver {
                Party::Admin => {
                    let r = self.admin.handle(env);
                    self.timings.admin += started.elapsed();
                    r.unwrap_or_else(|e| {
                        self.admin_errors.push(e);
                        vec![]
                    })
                }
                Party::Server => {
                    let r = self.server.handle(env);
                    self.timings.server += started.elapsed();
                    r
                }
                Party::Client(h) => {
                    let r = match self.clients.get_mut(h.0 as usize) {
                        Some(c) => c.handle(env, now),
                        None => vec![],
                    };
                    self.timings.clients += started.elapsed();
                    r
                }
                Party::AllClients => {
                    let r = self
                        .clients
                        .iter_mut()
                        .flat_map(|c| c.handle(env.clone(), now))
                        .collect();
                    self.timings.clients += started.elapsed();
                    r
                }
            };
            self.send_all(out);
        }
    }

    /// Send a group signature request for one client and deliver the reply.
    pub fn join(&mut self, h: ClientHandle) -> Result<(), ProtocolError> {
        let env = self.client(h).join();
        let before = self.admin_errors.len();
        self.send(env);
        self.run();
        match self.admin_errors.get(before) {
            Some(e) => Err(e.clone()),
            None => Ok(()),
        }
    }

    pub fn join_all(&mut self) -> Result<(), ProtocolError> {
        (0..self.clients.len()).try_for_each(|i| self.join(ClientHandle(i as u32)))
    }

    pub fn request_training(&mut self, h: ClientHandle) -> Result<(), ProtocolError> {
        let now = self.clock.now();
        let started = Instant::now();
        let env = self.client_mut(h).training_request(now);
        self.timings.clients += started.elapsed();
        self.send(env?);
        self.run();
        Ok(())
    }

    pub fn request_training_all(&mut self) -> Result<(), ProtocolError> {
        (0..self.clients.len()).try_for_each(|i| self.request_training(ClientHandle(i as u32)))
    }

    /// Select, collect updates, aggregate and broadcast. Returns the
    /// number of updates the server accepted.
    pub fn run_iteration(&mut self) -> Result<u64, ProtocolError> {
        let before = self.server.metrics().accepted_updates;
        let started = Instant::now();
        let notices = self.server.begin_iteration(self.config.n);
        self.timings.server += started.elapsed();
        self.send_all(notices?);
        self.run();
        let started = Instant::now();
        let broadcast = self.server.finish_iteration();
        self.timings.server += started.elapsed();
        self.send(broadcast?);
        self.run();
        let model = self.server.model().clone();
        let loss = fedlearn::pooled_loss(&model, &self.task.datasets)?;
        self.losses.push((self.server.iteration(), loss));
        self.models.push(model);
        Ok(self.server.metrics().accepted_updates - before)
    }

    pub fn finish(&mut self) {
        let out = self.server.finish_session();
        self.send_all(out);
        self.run();
    }

    /// Revoke a client's membership; the admin rotates the session.
    pub fn revoke(&mut self, h: ClientHandle, reason: &str) -> Result<(), ProtocolError> {
        let member = MemberId(h.0 as u64);
        let out = self.admin.revoke(member, reason)?;
        self.send_all(out);
        self.run();
        Ok(())
    }

    pub fn into_outcome(self) -> SessionOutcome {
        let client_errors = self
            .clients
            .iter()
            .flat_map(|c| c.errors().iter().map(move |e| (c.handle_id(), e.clone())))
            .collect();
        SessionOutcome {
            transcript: self.transcript,
            models: self.models,
            losses: self.losses,
            metrics: self.server.metrics().clone(),
            client_errors,
            expired: self.expired,
            timings: self.timings,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SessionOutcome {
    pub transcript: Transcript,
    /// Global model after each iteration.
    pub models: Vec<ModelParams>,
    /// `(iteration, pooled loss)`, starting with the initial model at 0.
    pub losses: Vec<(u32, f64)>,
    pub metrics: ServerMetrics,
    pub client_errors: Vec<(ClientHandle, ProtocolError)>,
    pub expired: u64,
    pub timings: RoleTimings,
}

/// Full session: all `m` clients join and request training, then `t`
/// iterations with `n` selected each, then the final model goes to all.
pub fn run_session_with(config: SessionConfig) -> Result<SessionOutcome, ProtocolError> {
    let mut sim = Simulation::new(config)?;
    sim.join_all()?;
    sim.request_training_all()?;
    for _ in 0..sim.config.t {
        sim.run_iteration()?;
    }
    sim.finish();
    Ok(sim.into_outcome())
}

pub fn run_session(m: usize, n: usize, t: u32, seed: u64) -> Result<SessionOutcome, ProtocolError> {
    run_session_with(SessionConfig::new(m, n, t, seed))
}
