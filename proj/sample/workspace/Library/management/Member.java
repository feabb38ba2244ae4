package management;

import java.util.ArrayList;
import java.util.List;

public class Member {
    private final String name;
    private final List<Book> loans = new ArrayList<>();

    public Member(String name) {
        this.name = name;
    }

    public String getName() {
        return name;
    }

    public int loanCount() {
        return loans.size();
    }

    public void borrowBook(Book book) {
        book.borrow();
        loans.add(book);
    }

    public void returnBook(Book book) {
        book.handBack();
        loans.remove(book);
    }
}
