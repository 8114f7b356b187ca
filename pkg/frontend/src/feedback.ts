/**
 * Review feedback pane (area 6). Renders the markdown body and converts
 * fix_lines into editor decorations for the caller to apply.
 */

import type { Review } from "./api.js";
import type { EditorDecoration } from "./editor.js";
import { renderMarkdown } from "./markdown.js";

export function renderFeedback(host: HTMLElement, review: Review): EditorDecoration[] {
  host.innerHTML = "";
  const pane = document.createElement("div");
  pane.className = review.review_needed ? "feedback" : "feedback feedback-ok";
  pane.innerHTML = renderMarkdown(review.body_markdown);
  host.appendChild(pane);

  if (review.redaction.leaked) {
    const note = document.createElement("p");
    note.className = "feedback-note";
    note.textContent = "The tutor tried to paste a full solution; that part was withheld.";
    host.appendChild(note);
  }

  return review.fix_lines.map((fix) => ({ line: fix.line, hint: fix.hint, kind: "CodeToFix" }));
}

export function renderUpstreamBanner(host: HTMLElement, message: string, onRetry: () => void): void {
  host.innerHTML = "";
  const banner = document.createElement("div");
  banner.className = "banner-error";
  const text = document.createElement("span");
  text.textContent = `The tutor is unreachable right now (${message}).`;
  banner.appendChild(text);
  const retry = document.createElement("button");
  retry.type = "button";
  retry.className = "banner-retry";
  retry.textContent = "Try again";
  retry.addEventListener("click", onRetry);
  banner.appendChild(retry);
  host.appendChild(banner);
}

export function clearFeedback(host: HTMLElement): void {
  host.innerHTML = "";
}
