/** First-visit walkthrough panel, dismissed once per browser. */

const SEEN_KEY = "codetutor-guide-seen";

export function maybeShowGuide(host: HTMLElement, storage: Storage = localStorage): void {
  if (storage.getItem(SEEN_KEY)) {
    return;
  }
  host.innerHTML = `
    <div class="guide">
      <h2>How to use the tutor</h2>
      <ol>
        <li>Pick an exercise from the list on the left.</li>
        <li>Read the problem and the input/output examples.</li>
        <li>Write your Python code in the editor.</li>
        <li><strong>Submit</strong> checks whether your code is correct.</li>
        <li><strong>Ask Code Tutor</strong> gives written feedback — marked
            lines in the editor show where to look.</li>
      </ol>
      <button type="button" class="guide-dismiss">Got it</button>
    </div>`;
  host.querySelector(".guide-dismiss")!.addEventListener("click", () => {
    storage.setItem(SEEN_KEY, "1");
    host.innerHTML = "";
  });
}
