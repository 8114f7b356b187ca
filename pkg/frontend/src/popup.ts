/**
 * Verdict popup (area 4's result). Three styles for the three verdict
 * states, plus an error style for API refusals like EmptyCode/InvalidCode.
 */

import { ApiError, type Verdict } from "./api.js";

const TITLES: Record<Verdict["state"], string> = {
  correct: "Correct!",
  wrong: "Not quite",
  error: "Something went wrong",
};

export function showVerdict(host: HTMLElement, verdict: Verdict, onClose: () => void): void {
  render(host, `popup-${verdict.state}`, TITLES[verdict.state], verdict.reason, verdict.error_type, onClose);
}

export function showApiError(host: HTMLElement, error: ApiError, onClose: () => void): void {
  const title = error.code === "EmptyCode" ? "Nothing to check" : "Check your code";
  render(host, "popup-error", title, error.message, error.code, onClose);
}

export function showLocalNotice(host: HTMLElement, message: string, onClose: () => void): void {
  render(host, "popup-error", "Nothing to check", message, null, onClose);
}

export function clearPopup(host: HTMLElement): void {
  host.innerHTML = "";
  host.classList.remove("open");
}

function render(
  host: HTMLElement,
  stateClass: string,
  title: string,
  message: string,
  tag: string | null,
  onClose: () => void,
): void {
  host.innerHTML = "";
  host.classList.add("open");
  const box = document.createElement("div");
  box.className = `popup ${stateClass}`;
  box.setAttribute("role", "alertdialog");

  const heading = document.createElement("h2");
  heading.textContent = title;
  box.appendChild(heading);

  if (tag) {
    const chip = document.createElement("span");
    chip.className = "popup-tag";
    chip.textContent = tag;
    box.appendChild(chip);
  }

  const body = document.createElement("p");
  body.textContent = message;
  box.appendChild(body);

  const close = document.createElement("button");
  close.type = "button";
  close.className = "popup-close";
  close.textContent = "Close";
  close.addEventListener("click", () => {
    clearPopup(host);
    onClose();
  });
  box.appendChild(close);

  host.appendChild(box);
  close.focus();
}
