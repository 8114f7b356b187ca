/** Exercise category tree (area 1). Leaves are buttons; branches just group. */

import type { CategoryNode } from "./api.js";

export function renderExerciseTree(
  root: HTMLElement,
  nodes: CategoryNode[],
  onSelect: (id: string) => void,
): void {
  root.innerHTML = "";
  if (!nodes.length) {
    root.innerHTML = '<p class="tree-empty">No exercises loaded yet.</p>';
    return;
  }
  root.appendChild(buildList(nodes, onSelect));
}

export function markSelected(root: HTMLElement, id: string | null): void {
  root.querySelectorAll<HTMLElement>(".leaf").forEach((el) => {
    el.classList.toggle("selected", id !== null && el.dataset.id === id);
  });
}

function buildList(nodes: CategoryNode[], onSelect: (id: string) => void): HTMLUListElement {
  const ul = document.createElement("ul");
  ul.className = "tree";
  for (const node of nodes) {
    const li = document.createElement("li");
    li.className = "branch";
    const name = document.createElement("span");
    name.className = "branch-name";
    name.textContent = node.name;
    li.appendChild(name);
    if (node.children.length) {
      li.appendChild(buildList(node.children, onSelect));
    }
    if (node.exercises.length) {
      const leaves = document.createElement("ul");
      leaves.className = "leaves";
      for (const exercise of node.exercises) {
        const item = document.createElement("li");
        const button = document.createElement("button");
        button.type = "button";
        button.className = "leaf";
        button.dataset.id = exercise.id;
        button.textContent = exercise.title;
        button.addEventListener("click", () => onSelect(exercise.id));
        item.appendChild(button);
        leaves.appendChild(item);
      }
      li.appendChild(leaves);
    }
    ul.appendChild(li);
  }
  return ul;
}
