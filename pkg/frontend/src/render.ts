// Pure HTML-string renderers: the whole UI is a function of AppState.
// Interactions are wired by data-action attributes (delegated in main).

import type { ConflictDoc, ExplanationDoc, SessionDoc } from "./api.js";
import {
  badgeFor,
  badgeLabel,
  escapeHtml as esc,
  findStatement,
  groupByLayer,
} from "./format.js";
import type { AppState } from "./state.js";
import { unresolvedConflicts } from "./state.js";


function renderHeader(state: AppState): string {
  const options = state.packs
    .map((p) => `<option value="${esc(p)}" ${p === state.pack ? "selected" : ""}>${esc(p)}</option>`)
    .join("");
  const banner = state.offline
    ? `<div class="banner offline">service unreachable: showing the last known state</div>`
    : "";
  const error = state.error
    ? `<div class="banner error">` +
      `<b>${esc(state.error.code)}</b> ${esc(state.error.message)} ` +
      `<i>(at revision ${state.error.revision})</i>` +
      `<button data-action="dismiss-error">dismiss</button></div>`
    : "";
  return `
  <header>
    <h1>argumentation workbench</h1>
    <label>pack
      <select id="pack-select">${options}</select>
    </label>
    <button data-action="new-session">new session</button>
    <span class="revision">${state.sessionId ? `session ${esc(state.sessionId)} · revision ${state.revision}` : "no session"}</span>
  </header>
  ${banner}${error}`;
}

function renderEvidence(session: SessionDoc): string {
  const groups = groupByLayer(session.evidencePredicates)
    .map(({ layer, predicates }) => {
      const opts = predicates
        .map((p) => `<option value="${esc(p.name)}/${p.arity}">${esc(p.name)}/${p.arity}</option>`)
        .join("");
      return `<optgroup label="${esc(layer)}">${opts}</optgroup>`;
    })
    .join("");
  const constants = session.constants
    .map((c) => `<option value="${esc(c)}"></option>`)
    .join("");
  const active = session.evidence.length
    ? session.evidence
        .map(
          (l) =>
            `<li><code>${esc(l)}</code>` +
            `<button data-action="retract" data-literal="${esc(l)}">retract</button></li>`,
        )
        .join("")
    : "<li class='empty'>no evidence asserted yet</li>";
  return `
  <section class="panel" id="evidence-panel">
    <h2>evidence</h2>
    <form id="evidence-form">
      <select id="evidence-predicate" required>
        <option value="">predicate…</option>${groups}
      </select>
      <span id="evidence-args"></span>
      <label class="neg"><input type="checkbox" id="evidence-negated"> neg</label>
      <button type="submit">assert</button>
    </form>
    <datalist id="constants">${constants}</datalist>
    <ul class="evidence-list">${active}</ul>
  </section>`;
}

function renderVerdicts(state: AppState): string {
  const rows = state.watched
    .map((goal) => {
      const verdicts = state.verdicts[goal];
      const badges = (verdicts ?? [])
        .map((v) => {
          const badge = badgeFor(v.status);
          return (
            `<button class="badge ${badge}" data-action="explain" ` +
            `data-goal="${esc(v.goal)}" title="click for the explanation">` +
            `${esc(v.goal)} · ${esc(badgeLabel(v.status))}</button>` +
            `<button class="hint-link" data-action="hints" data-goal="${esc(v.goal)}">hints</button>`
          );
        })
        .join("");
      return (
        `<li><code>${esc(goal)}</code>` +
        `<button data-action="unwatch" data-goal="${esc(goal)}">stop watching</button>` +
        `<div class="badges">${verdicts ? badges || "<i>no groundings</i>" : "<i>loading…</i>"}</div></li>`
      );
    })
    .join("");
  return `
  <section class="panel" id="verdict-panel">
    <h2>watched goals</h2>
    <form id="watch-form">
      <input id="watch-goal" placeholder="perform(a, Country)" required>
      <button type="submit">watch</button>
    </form>
    <ul class="watched">${rows || "<li class='empty'>watch a goal pattern to see verdicts</li>"}</ul>
  </section>`;
}

function renderExplanation(state: AppState): string {
  if (!state.explanation || !state.session) return "";
  const { goal, doc } = state.explanation;
  return `
  <section class="panel" id="explanation-panel">
    <h2>explanation: <code>${esc(goal)}</code>
      <button data-action="close-explanation">close</button></h2>
    ${renderExplanationBody(doc, state.session.theory, state.revealed)}
  </section>`;
}

export function renderExplanationBody(
  doc: ExplanationDoc,
  theoryText: string,
  revealed: string | null,
): string {
  const badge = badgeFor(doc.status);
  let winner = "<p>no rule concludes this goal.</p>";
  if (doc.winner) {
    const steps = doc.winner.rules
      .map((r) => {
        const body = r.body.length ? ` &larr; ${esc(r.body.join(", "))}` : "";
        return `<li><span class="chip" data-action="reveal" data-label="${esc(r.label)}">${esc(r.label)}</span> <code>${esc(r.head)}</code>${body}</li>`;
      })
      .join("");
    winner = `<ol class="derivation">${steps}</ol>`;
  }
  const conflicts = doc.conflicts
    .map((c) => {
      const decided =
        c.decidedBy === "undecided"
          ? `<span class="chip undecided">undecided</span>`
          : c.decidedBy
              .map(
                (l) =>
                  `<span class="chip" data-action="reveal" data-label="${esc(l)}">${esc(l)}</span>`,
              )
              .join(" ");
      return `<li>against <b>${esc(c.against)}</b> at <code>${esc(c.at)}</code> — decided by ${decided}</li>`;
    })
    .join("");
  const revealedText = revealed
    ? `<pre class="statement">${esc(findStatement(theoryText, revealed) ?? `(no statement for ${revealed})`)}</pre>`
    : "";
  const hints = doc.hints.length
    ? `<h3>would flip with</h3><ul>` +
      doc.hints
        .map((h) => `<li><code>${esc(h.assume.join(", "))}</code></li>`)
        .join("") +
      `</ul>`
    : "";
  return `
    <p>status: <span class="badge ${badge}">${esc(badgeLabel(doc.status))}</span></p>
    ${winner}
    ${doc.conflicts.length ? `<h3>conflicts</h3><ul class="conflicts">${conflicts}</ul>` : ""}
    ${revealedText}${hints}`;
}

export function renderConflictItem(c: ConflictDoc, index: number): string {
  const witness = c.witness.map((w) => `<code>${esc(w)}</code>`).join(", ");
  const suggestion = c.suggestion
    ? `<button data-action="accept-suggestion" data-index="${index}">` +
      `accept ${esc(c.suggestion.higher)} &gt; ${esc(c.suggestion.lower)}</button>`
    : "<i>no suggestion (incomparable bodies)</i>";
  return `
  <li class="wizard-item">
    <b>${esc(c.ruleA)}</b> vs <b>${esc(c.ruleB)}</b>
    <div>heads: <code>${esc(c.headA)}</code> / <code>${esc(c.headB)}</code></div>
    <div>witness: ${witness}</div>
    <div class="wizard-actions">${suggestion}
      <form class="manual-priority" data-index="${index}">
        <input name="label" placeholder="label" required>
        <input name="higher" placeholder="higher rule" required
               value="${esc(c.ruleB)}">
        <input name="lower" placeholder="lower rule" required
               value="${esc(c.ruleA)}">
        <button type="submit">add priority</button>
      </form>
    </div>
  </li>`;
}

function renderConflicts(state: AppState): string {
  const open = unresolvedConflicts(state);
  const items = open.map((c) => renderConflictItem(c, state.conflicts.indexOf(c)));
  const resolved = state.conflicts.length - open.length;
  return `
  <section class="panel" id="conflict-panel">
    <h2>conflict resolution <span class="count">${open.length} open · ${resolved} resolved</span></h2>
    <ul class="wizard">${items.join("") || "<li class='empty'>no unresolved conflicts</li>"}</ul>
  </section>`;
}

function renderHints(state: AppState): string {
  if (!state.hints) return "";
  const rows = state.hints.answers
    .map((a) => {
      const literals = a.assume
        .map((l) => `<code>${esc(l)}</code>`)
        .join(" + ");
      return (
        `<li><label><input type="checkbox" disabled> ${literals || "<i>already holds</i>"}</label>` +
        (a.assume.length
          ? `<button data-action="assume" data-literals="${esc(JSON.stringify(a.assume))}">assert these</button>`
          : "") +
        ` <span class="tier">${esc(badgeLabel(a.status))}</span></li>`
      );
    })
    .join("");
  const truncated = state.hints.truncated
    ? "<p><i>search truncated by budget</i></p>"
    : "";
  return `
  <section class="panel" id="hints-panel">
    <h2>what to look for: <code>${esc(state.hints.goal)}</code>
      <button data-action="close-hints">close</button></h2>
    <ul class="hints">${rows || "<li class='empty'>nothing within the size bound would establish it</li>"}</ul>
    ${truncated}
  </section>`;
}

export function render(state: AppState): string {
  if (!state.session) {
    return renderHeader(state) + `<main><p class="empty">create a session to begin.</p></main>`;
  }
  return (
    renderHeader(state) +
    `<main>` +
    renderEvidence(state.session) +
    renderVerdicts(state) +
    renderExplanation(state) +
    renderHints(state) +
    renderConflicts(state) +
    `</main>`
  );
}
